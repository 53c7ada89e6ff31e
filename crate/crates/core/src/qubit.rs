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

//! Qubits as anticommuting reflection pairs, and the overlap between them.

use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operator::{commutator_norm, Reflection};
use crate::spectral::{eigh, norm_bound_below};
use crate::tolerance;

/// Which member of a qubit pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    X,
    Z,
}

impl Label {
    pub const BOTH: [Label; 2] = [Label::X, Label::Z];

    pub fn other(self) -> Label {
        match self {
            Label::X => Label::Z,
            Label::Z => Label::X,
        }
    }
}

/// Pair of reflections `(X, Z)` with `‖{X, Z}‖ ≤ tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitPair {
    x: Reflection,
    z: Reflection,
    anticomm_defect: f64,
}

impl QubitPair {
    pub fn new(x: Reflection, z: Reflection) -> Result<Self> {
        Self::with_tolerance(x, z, tolerance::PAIR)
    }

    pub fn with_tolerance(x: Reflection, z: Reflection, tol: f64) -> Result<Self> {
        if x.dim() != z.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: z.dim(),
            });
        }
        let ac = ComplexMatrix::anticommutator(x.matrix(), z.matrix());
        let anticomm_defect = norm_bound_below(&ac, 0.0)?;
        if anticomm_defect > tol {
            return Err(Error::NotAnticommuting {
                defect: anticomm_defect,
                tol,
            });
        }
        Ok(Self {
            x,
            z,
            anticomm_defect,
        })
    }

    /// Certifies both matrices as reflections, then the pair.
    pub fn from_matrices(x: ComplexMatrix, z: ComplexMatrix) -> Result<Self> {
        Self::new(Reflection::from_matrix(x)?, Reflection::from_matrix(z)?)
    }

    pub fn x(&self) -> &Reflection {
        &self.x
    }

    pub fn z(&self) -> &Reflection {
        &self.z
    }

    pub fn get(&self, label: Label) -> &Reflection {
        match label {
            Label::X => &self.x,
            Label::Z => &self.z,
        }
    }

    pub fn anticomm_defect(&self) -> f64 {
        self.anticomm_defect
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }
}

/// Symmetric `n×n` overlap table with the maximising `(S, T)` per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapMatrix {
    n: usize,
    values: Vec<f64>,
    argmax: Vec<Option<(Label, Label)>>,
}

impl OverlapMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// `(S_i, T_j)` attaining the entry; `None` on the diagonal.
    pub fn argmax(&self, i: usize, j: usize) -> Option<(Label, Label)> {
        self.argmax[i * self.n + j]
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.values.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }
}

/// Ordered family of qubits on one ambient space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QubitSystem {
    dim: usize,
    pairs: Vec<QubitPair>,
    #[serde(skip)]
    overlap: OnceLock<OverlapMatrix>,
}

impl PartialEq for QubitSystem {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.pairs == other.pairs
    }
}

impl QubitSystem {
    pub fn new(pairs: Vec<QubitPair>) -> Result<Self> {
        let dim = pairs
            .first()
            .map(QubitPair::dim)
            .ok_or_else(|| Error::InvalidInput("qubit system needs at least one pair".into()))?;
        if let Some(p) = pairs.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
        Ok(Self {
            dim,
            pairs,
            overlap: OnceLock::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[QubitPair] {
        &self.pairs
    }

    pub fn pair(&self, j: usize) -> &QubitPair {
        &self.pairs[j]
    }

    pub fn into_pairs(self) -> Vec<QubitPair> {
        self.pairs
    }

    /// Cached overlap table; see [`overlap`].
    pub fn overlap_matrix(&self) -> Result<&OverlapMatrix> {
        if let Some(m) = self.overlap.get() {
            return Ok(m);
        }
        let m = compute_overlap(self)?;
        let _ = self.overlap.set(m);
        Ok(self.overlap.get().expect("overlap just set"))
    }
}

/// `overlap(i, j) = max_{S,T ∈ {X,Z}} ‖[S_i, T_j]‖`, zero on the diagonal.
pub fn overlap(system: &QubitSystem) -> Result<OverlapMatrix> {
    system.overlap_matrix().cloned()
}

fn compute_overlap(system: &QubitSystem) -> Result<OverlapMatrix> {
    let n = system.n();
    let mut tasks = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for s in Label::BOTH {
                for t in Label::BOTH {
                    tasks.push((i, j, s, t));
                }
            }
        }
    }
    let norms: Vec<f64> = tasks
        .par_iter()
        .map(|&(i, j, s, t)| {
            commutator_norm(
                system.pair(i).get(s).matrix(),
                system.pair(j).get(t).matrix(),
            )
        })
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; n * n];
    let mut argmax = vec![None; n * n];
    for (&(i, j, s, t), &v) in tasks.iter().zip(&norms) {
        if argmax[i * n + j].is_none() || v > values[i * n + j] {
            values[i * n + j] = v;
            values[j * n + i] = v;
            argmax[i * n + j] = Some((s, t));
            argmax[j * n + i] = Some((t, s));
        }
    }
    Ok(OverlapMatrix { n, values, argmax })
}

/// Unitary `U` with `U†ZU = σ^z ⊗ I` and `U†XU = σ^x ⊗ I`, the qubit factor
/// being the most significant.
///
/// With `u⁻_j` the eigenvectors of `Z` for `−1` in eigensolver order, column
/// `j` of `U` is `X u⁻_j` and column `d/2 + j` is `u⁻_j`. This is the product
/// of `Π₊XΠ₋S + Π₋` with the relabelling that sends the pairing of the two
/// eigenspaces to the standard tensor basis.
pub fn tensor_normal_form(pair: &QubitPair) -> Result<ComplexMatrix> {
    let d = pair.dim();
    if d % 2 != 0 {
        return Err(Error::Structural(format!("odd dimension {d} cannot host a qubit")));
    }
    let e = eigh(pair.z().op())?;
    let minus = e.values.iter().filter(|&&v| v < 0.0).count();
    if minus != d - minus {
        return Err(Error::Structural(format!(
            "eigenspaces of Z have ranks {} and {minus}",
            d - minus
        )));
    }
    let half = d / 2;
    let x = pair.x().matrix();
    let mut u = ComplexMatrix::zeros(d);
    for j in 0..half {
        let col: Vec<_> = (0..d).map(|r| e.vectors.get(r, j)).collect();
        let xcol = x.apply(&col);
        for r in 0..d {
            u.set(r, j, xcol[r]);
            u.set(r, half + j, col[r]);
        }
    }
    let id = ComplexMatrix::identity(d);
    let unitarity = (&u.adjoint() * &u).max_abs_diff(&id);
    if unitarity > 1e-10 {
        return Err(Error::Consistency {
            what: "normal form unitarity".into(),
            lhs: unitarity,
            rhs: 1e-10,
        });
    }
    let sz = crate::pauli::Pauli::Z.matrix();
    let sx = crate::pauli::Pauli::X.matrix();
    let idh = ComplexMatrix::identity(half);
    let conj = |m: &ComplexMatrix| &(&u.adjoint() * m) * &u;
    let rz = conj(pair.z().matrix()).max_abs_diff(&ComplexMatrix::kron(&sz, &idh));
    let rx = conj(x).max_abs_diff(&ComplexMatrix::kron(&sx, &idh));
    if rz.max(rx) > 1e-9 {
        return Err(Error::Consistency {
            what: "normal form conjugation".into(),
            lhs: rz.max(rx),
            rhs: 1e-9,
        });
    }
    Ok(u)
}

/// Shorthand used by fixtures: certifies `(X, Z)` matrices as a pair.
pub(crate) fn pair_unchecked(x: ComplexMatrix, z: ComplexMatrix) -> QubitPair {
    let x = Reflection::from_matrix_unchecked(x);
    let z = Reflection::from_matrix_unchecked(z);
    let ac = ComplexMatrix::anticommutator(x.matrix(), z.matrix());
    let anticomm_defect = crate::spectral::norm_of(&ac).unwrap_or(f64::NAN);
    QubitPair {
        x,
        z,
        anticomm_defect,
    }
}
