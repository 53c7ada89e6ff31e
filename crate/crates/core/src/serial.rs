// Copyright 2026 The overlap-lab Developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Operator serialization.
//!
//! JSON: `{"dim": d, "re": [[..]; d], "im": [[..]; d]}`, rows first.
//! Binary: `dim` as a little-endian `u64`, then `d²` entries in row-major
//! order, each as little-endian `f64` real part followed by imaginary part.
//! Both formats round-trip bit-exactly.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (re, im) = self.to_row_major();
        MatrixJson {
            dim: self.dim(),
            re,
            im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        from_tables(j).map_err(serde::de::Error::custom)
    }
}

fn from_tables(j: MatrixJson) -> Result<ComplexMatrix> {
    if j.re.len() != j.dim || j.im.len() != j.dim {
        return Err(Error::Serialization(format!(
            "expected {} rows, found {} / {}",
            j.dim,
            j.re.len(),
            j.im.len()
        )));
    }
    let rows: Vec<Vec<C64>> = j
        .re
        .iter()
        .zip(&j.im)
        .map(|(r, i)| {
            if r.len() != j.dim || i.len() != j.dim {
                return Err(Error::Serialization("ragged row".into()));
            }
            Ok(r.iter().zip(i).map(|(&a, &b)| C64::new(a, b)).collect())
        })
        .collect::<Result<_>>()?;
    ComplexMatrix::from_rows(&rows)
}

pub fn to_json(m: &ComplexMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}

pub fn from_json(s: &str) -> Result<ComplexMatrix> {
    serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
}

pub fn to_bytes(m: &ComplexMatrix) -> Vec<u8> {
    let d = m.dim();
    let mut out = Vec::with_capacity(8 + 16 * d * d);
    out.extend_from_slice(&(d as u64).to_le_bytes());
    for i in 0..d {
        for j in 0..d {
            let z = m.get(i, j);
            out.extend_from_slice(&z.re.to_le_bytes());
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<ComplexMatrix> {
    let header: [u8; 8] = bytes
        .get(..8)
        .and_then(|b| b.try_into().ok())
        .ok_or_else(|| Error::Serialization("missing dimension header".into()))?;
    let d = usize::try_from(u64::from_le_bytes(header))
        .map_err(|_| Error::Serialization("dimension overflows usize".into()))?;
    let expected = d
        .checked_mul(d)
        .and_then(|n| n.checked_mul(16))
        .and_then(|n| n.checked_add(8))
        .ok_or_else(|| Error::Serialization("dimension too large".into()))?;
    if bytes.len() != expected || d == 0 {
        return Err(Error::Serialization(format!(
            "expected {expected} bytes for dim {d}, found {}",
            bytes.len()
        )));
    }
    let f = |k: usize| f64::from_le_bytes(bytes[k..k + 8].try_into().expect("8 bytes"));
    let rows: Vec<Vec<C64>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let k = 8 + 16 * (i * d + j);
                    C64::new(f(k), f(k + 8))
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(&rows)
}
