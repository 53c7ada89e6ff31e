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

//! A family of `2n` qubits with overlaps at most `ε` that any separation must
//! move by `Ω(nε)`.
//!
//! The first `n` qubits are standard Paulis. The last `n` are conjugated by
//! `e^{iεH}` with `H = ¼(σ^z_1 + … + σ^z_n)(σ^z_{n+1} + … + σ^z_{2n})`, which
//! is diagonal, so every operator is built entrywise.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, I};
use crate::operator::HermitianOperator;
use crate::pauli::{local, Pauli};
use crate::qubit::{pair_unchecked, QubitSystem};
use crate::report::BoundCheck;
use crate::spectral::norm_of;

#[derive(Debug, Clone)]
pub struct MovementExample {
    pub n: usize,
    pub epsilon: f64,
    pub system: QubitSystem,
    pub hamiltonian: HermitianOperator,
}

/// Largest `n` accepted: the ambient dimension is `4^n`.
pub const MOVEMENT_MAX_N: usize = 6;

fn diag_h(n: usize, x: usize) -> f64 {
    let m = 2 * n;
    let z = |q: usize| if (x >> (m - 1 - q)) & 1 == 0 { 1.0 } else { -1.0 };
    let a: f64 = (0..n).map(z).sum();
    let b: f64 = (n..m).map(z).sum();
    0.25 * a * b
}

pub fn build_movement_example(n: usize, eps: f64) -> Result<MovementExample> {
    if !(1..=MOVEMENT_MAX_N).contains(&n) {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: format!("[1, {MOVEMENT_MAX_N}]"),
        });
    }
    let limit = PI / (n * n) as f64;
    if !(eps.is_finite() && (0.0..=limit).contains(&eps)) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: format!("[0, π/n²] = [0, {limit}]"),
        });
    }
    let m = 2 * n;
    let dim = 1usize << m;
    let h: Vec<f64> = (0..dim).map(|x| diag_h(n, x)).collect();
    let pairs = (0..m)
        .map(|j| {
            let sx = local(Pauli::X, j, m);
            let sz = local(Pauli::Z, j, m);
            if j < n {
                pair_unchecked(sx, sz)
            } else {
                let x = ComplexMatrix::from_fn(dim, |a, b| {
                    let v = sx.get(a, b);
                    if v.norm() == 0.0 {
                        v
                    } else {
                        v * (I * (eps * (h[a] - h[b]))).exp()
                    }
                });
                pair_unchecked(x, sz)
            }
        })
        .collect();
    let hamiltonian = HermitianOperator::new(ComplexMatrix::from_real_diagonal(&h))?;
    Ok(MovementExample {
        n,
        epsilon: eps,
        system: QubitSystem::new(pairs)?,
        hamiltonian,
    })
}

impl MovementExample {
    /// `X_J X_K`, with `J` the first `n` qubits and `K` the rest.
    pub fn xj_xk(&self) -> ComplexMatrix {
        product_xj_xk(self.n, |j| self.system.pair(j).x().matrix().clone())
    }
}

fn product_xj_xk(n: usize, x: impl Fn(usize) -> ComplexMatrix) -> ComplexMatrix {
    let mut p = x(0);
    for j in 1..2 * n {
        p = &p * &x(j);
    }
    p
}

/// Closed forms of the example against measured values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MovementChecks {
    pub hamiltonian_norm: f64,
    /// `max_{j ≤ n < k} |‖[X_j, X_k]‖ − |e^{iε} − 1||`.
    pub cross_commutator_error: f64,
    /// Largest overlap among pairs that should commute exactly.
    pub other_overlaps: f64,
    pub xjxk_defect: f64,
    pub xjxk_expected: f64,
    pub checks: Vec<BoundCheck>,
}

pub fn movement_closed_forms(ex: &MovementExample) -> Result<MovementChecks> {
    let n = ex.n;
    let eps = ex.epsilon;
    let o = ex.system.overlap_matrix()?;
    let cross = (I * eps).exp() - C64::new(1.0, 0.0);
    let cross = cross.norm();
    let mut cross_err = 0.0f64;
    let mut other = 0.0f64;
    for j in 0..2 * n {
        for k in j + 1..2 * n {
            if j < n && k >= n {
                let xx = norm_of(&ComplexMatrix::commutator(
                    ex.system.pair(j).x().matrix(),
                    ex.system.pair(k).x().matrix(),
                ))?;
                cross_err = cross_err.max((xx - cross).abs());
                cross_err = cross_err.max((o.get(j, k) - cross).abs());
            } else {
                other = other.max(o.get(j, k));
            }
        }
    }
    let p = ex.xj_xk();
    let id = ComplexMatrix::identity(p.dim());
    let xjxk_defect = norm_of(&(&(&p * &p) - &id))?;
    let xjxk_expected = ((I * ((n * n) as f64 * eps)).exp() - C64::new(1.0, 0.0)).norm();
    let hamiltonian_norm = ex.hamiltonian.norm()?;
    let tol = 1e-9;
    let checks = vec![
        BoundCheck::new("|‖H‖ − n²/4|", (hamiltonian_norm - (n * n) as f64 / 4.0).abs(), 1e-10),
        BoundCheck::new("|‖[X_j, X_k]‖ − |e^{iε} − 1||", cross_err, tol),
        BoundCheck::new("other cross overlaps", other, tol),
        BoundCheck::new(
            "|‖(X_J X_K)² − I‖ − |e^{in²ε} − 1||",
            (xjxk_defect - xjxk_expected).abs(),
            tol,
        ),
    ];
    Ok(MovementChecks {
        hamiltonian_norm,
        cross_commutator_error: cross_err,
        other_overlaps: other,
        xjxk_defect,
        xjxk_expected,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MovementLowerBound {
    pub max_movement: f64,
    pub lower_bound: f64,
    pub xjxk_defect: f64,
    pub chain_rhs: f64,
    pub checks: Vec<BoundCheck>,
}

/// Checks a separated family `X'_j` against the example.
///
/// `separated[j]` must act on the example's space tensored with
/// `C^{extra}` (the example's factor first); `extra = 1` for separations that
/// stay on the original space.
pub fn movement_lower_bound(
    ex: &MovementExample,
    separated: &[ComplexMatrix],
    extra: usize,
) -> Result<MovementLowerBound> {
    let m = 2 * ex.n;
    if separated.len() != m {
        return Err(Error::InvalidInput(format!(
            "expected {m} separated X operators, got {}",
            separated.len()
        )));
    }
    let pad = ComplexMatrix::identity(extra);
    let orig: Vec<ComplexMatrix> = (0..m)
        .map(|j| ComplexMatrix::kron(ex.system.pair(j).x().matrix(), &pad))
        .collect();
    let mut max_movement = 0.0f64;
    for (a, b) in orig.iter().zip(separated) {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                left: a.dim(),
                right: b.dim(),
            });
        }
        max_movement = max_movement.max(norm_of(&(a - b))?);
    }
    let n = ex.n as f64;
    let lower_bound = n * ex.epsilon / (2.0 * PI);
    let p = ex.xj_xk();
    let id = ComplexMatrix::identity(p.dim());
    let xjxk_defect = norm_of(&(&(&p * &p) - &id))?;
    let chain_rhs = 4.0 * n * max_movement;
    let checks = vec![
        BoundCheck::at_least("max_j ‖X_j − X'_j‖ ≥ nε/(2π)", max_movement, lower_bound),
        BoundCheck::new("‖(X_J X_K)² − I‖ ≤ 4n max_j ‖X'_j − X_j‖", xjxk_defect, chain_rhs + 1e-12),
    ];
    Ok(MovementLowerBound {
        max_movement,
        lower_bound,
        xjxk_defect,
        chain_rhs,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_epsilon_is_independent() {
        let ex = build_movement_example(2, 0.0).unwrap();
        assert_eq!(ex.system.overlap_matrix().unwrap().max_off_diagonal(), 0.0);
    }

    #[test]
    fn closed_forms_at_small_scale() {
        let ex = build_movement_example(2, 0.1).unwrap();
        let c = movement_closed_forms(&ex).unwrap();
        assert!(c.checks.iter().all(|c| c.pass), "{:?}", c.checks);
        let o = ex.system.overlap_matrix().unwrap();
        assert!((o.get(0, 2) - 0.099_958_34).abs() < 1e-8);
        assert_eq!(o.argmax(0, 2), Some((crate::qubit::Label::X, crate::qubit::Label::X)));
        assert!((c.xjxk_defect - ((I * 0.4).exp() - 1.0).norm()).abs() < 1e-12);
    }

    #[test]
    fn overlap_entries_at_one_hundredth() {
        let ex = build_movement_example(2, 0.01).unwrap();
        let o = ex.system.overlap_matrix().unwrap();
        let expected = ((I * 0.01).exp() - 1.0).norm();
        for j in 0..4 {
            for k in 0..4 {
                let v = o.get(j, k);
                if (j < 2) != (k < 2) {
                    assert!((v - expected).abs() < 1e-12);
                } else {
                    assert!(v < 1e-15);
                }
            }
        }
    }

    #[test]
    fn range_is_checked() {
        assert!(build_movement_example(2, 1.0).is_err());
        assert!(build_movement_example(0, 0.0).is_err());
    }
}
