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

//! Pure and mixed states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::operator::HermitianOperator;
use crate::spectral::eigenvalues;
use crate::tolerance;

/// Unit vector in `C^dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

pub(crate) fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidInput("empty state".into()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > tolerance::STATE_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales `v` to unit norm.
    pub fn normalized(mut v: Vec<C64>) -> Result<Self> {
        let norm = vec_norm(&v);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        v.iter_mut().for_each(|a| *a /= norm);
        Self::new(v)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = vec![ZERO; dim];
        v[index] = ONE;
        Self { amplitudes: v }
    }
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityOperator {
        let a = &self.amplitudes;
        let m = ComplexMatrix::from_fn(a.len(), |i, j| a[i] * a[j].conj());
        DensityOperator::from_matrix_unchecked(m)
    }
}

/// Positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.matrix().trace();
        if (tr.re - 1.0).abs() > tolerance::DENSITY || tr.im.abs() > tolerance::DENSITY {
            return Err(Error::Precondition(format!("density trace {tr} ≠ 1")));
        }
        let min = eigenvalues(&op)?.first().copied().unwrap_or(0.0);
        if min < -tolerance::DENSITY {
            return Err(Error::Precondition(format!(
                "density has negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { op })
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self {
            op: HermitianOperator::from_parts_unchecked(m),
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn trace(&self) -> f64 {
        self.matrix().trace().re
    }

    /// `Tr(Aρ)`.
    pub fn expectation(&self, a: &ComplexMatrix) -> C64 {
        let r = self.matrix();
        let mut acc = ZERO;
        for i in 0..r.dim() {
            for k in 0..r.dim() {
                acc += a.get(i, k) * r.get(k, i);
            }
        }
        acc
    }
}
