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

//! Separation by swapping each qubit into a fresh register.

use super::{Method, SeparationReport, StepTrace};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, I};
use crate::operator::Reflection;
use crate::pauli::{local, Pauli};
use crate::qubit::{Label, QubitPair, QubitSystem};
use crate::report::BoundCheck;
use crate::spectral::norm_of;

/// Largest `dim H · 2^n` the dense swap separation accepts.
pub const SWAP_MAX_DIM: usize = 1 << 11;

#[derive(Debug, Clone)]
pub struct SwapSeparation {
    /// `X'_j, Z'_j` on `H ⊗ (C²)^{⊗n}`.
    pub system: QubitSystem,
    pub report: SeparationReport,
    /// `‖S'_j − S_j‖` per qubit, maximised over `S ∈ {X, Z}`.
    pub movement_per_qubit: Vec<f64>,
}

/// `½(I⊗I + X⊗σ^x_j + Z⊗σ^z_j + i XZ⊗σ^y_j)`, which exchanges the qubit
/// `(X, Z)` with register `j`.
pub fn swap_operator(pair: &QubitPair, j: usize, n: usize) -> ComplexMatrix {
    let (x, z) = (pair.x().matrix(), pair.z().matrix());
    let xz = (x * z).scale(I);
    let terms = [
        ComplexMatrix::identity(x.dim() << n),
        ComplexMatrix::kron(x, &local(Pauli::X, j, n)),
        ComplexMatrix::kron(z, &local(Pauli::Z, j, n)),
        ComplexMatrix::kron(&xz, &local(Pauli::Y, j, n)),
    ];
    let sum = terms.iter().skip(1).fold(terms[0].clone(), |a, t| &a + t);
    sum.scale_real(0.5)
}

/// `T'_j = (S_1 ⋯ S_{j−1}) T_j (S_{j−1} ⋯ S_1)` for every qubit.
///
/// The report's `movement` lists `‖X'_j − X_j‖, ‖Z'_j − Z_j‖` in qubit order,
/// `bound` is `2ε(n−1)` with `ε` the measured input overlap, and the checks
/// include the per-qubit `2ε(j−1)` bound. [`swap_bound_checks`] re-checks the
/// per-qubit bound against any other `ε`.
pub fn swap_separate(system: &QubitSystem) -> Result<SwapSeparation> {
    let n = system.n();
    let h = system.dim();
    let full = h.saturating_mul(1 << n);
    if full > SWAP_MAX_DIM {
        return Err(Error::MemoryBudget {
            required: full,
            limit: SWAP_MAX_DIM,
        });
    }
    let eps = system.overlap_matrix()?.max_off_diagonal();
    let id_anc = ComplexMatrix::identity(1 << n);
    let id_full = ComplexMatrix::identity(full);

    let mut w = id_full.clone();
    let mut pairs = Vec::with_capacity(n);
    let mut movement = Vec::with_capacity(2 * n);
    let mut movement_per_qubit = Vec::with_capacity(n);
    let mut max_unitarity = 0.0f64;
    for j in 0..n {
        let pair = system.pair(j);
        let mut out = [None, None];
        let mut worst = 0.0f64;
        for (slot, label) in Label::BOTH.into_iter().enumerate() {
            let t = ComplexMatrix::kron(pair.get(label).matrix(), &id_anc);
            let moved = (&(&w * &t) * &w.adjoint()).hermitian_part();
            let d = norm_of(&(&moved - &t))?;
            movement.push(d);
            worst = worst.max(d);
            out[slot] = Some(Reflection::with_tolerance(
                crate::operator::HermitianOperator::from_parts_unchecked(moved),
                1e-10,
            )?);
        }
        movement_per_qubit.push(worst);
        let [x, z] = out;
        pairs.push(QubitPair::with_tolerance(
            x.expect("x set"),
            z.expect("z set"),
            1e-10,
        )?);

        let s = swap_operator(pair, j, n);
        let unitarity = (&s.adjoint() * &s).max_abs_diff(&id_full);
        max_unitarity = max_unitarity.max(unitarity);
        if unitarity > 1e-10 {
            return Err(Error::Structural(format!(
                "swap operator {j} is not unitary (defect {unitarity:.3e})"
            )));
        }
        if j + 1 < n {
            w = &w * &s;
        }
    }
    let out = QubitSystem::new(pairs)?;
    let residual = out.overlap_matrix()?.max_off_diagonal();
    let anticomm = out
        .pairs()
        .iter()
        .map(QubitPair::anticomm_defect)
        .fold(0.0, f64::max);
    let bound = 2.0 * eps * (n as f64 - 1.0);
    let max_movement = movement.iter().copied().fold(0.0, f64::max);

    let mut checks = vec![
        BoundCheck::new("max ‖[S'_i, T'_j]‖", residual, 1e-10),
        BoundCheck::new("max ‖{X'_j, Z'_j}‖", anticomm, 1e-10),
        BoundCheck::new("max ‖S_j† S_j − I‖", max_unitarity, 1e-10),
    ];
    checks.extend(swap_bound_checks(&movement_per_qubit, eps, "overlap"));

    let slack = movement
        .iter()
        .enumerate()
        .map(|(k, m)| 2.0 * eps * (k / 2) as f64 - m)
        .collect();
    let report = SeparationReport {
        method: Method::Swap,
        n,
        epsilon: eps,
        measured_epsilon: eps,
        order: (0..n).collect(),
        trace: vec![StepTrace {
            k: 0,
            delta: 0.0,
            epsilon: eps,
            rounding_distance: None,
            max_q_commutator: None,
            q_movement: None,
        }],
        movement,
        max_movement,
        max_residual_commutator: residual,
        bound,
        slack,
        precondition_ok: true,
        warnings: Vec::new(),
        rank_changes: Vec::new(),
        checks,
    };
    Ok(SwapSeparation {
        system: out,
        report,
        movement_per_qubit,
    })
}

/// `‖S'_j − S_j‖ ≤ 2ε(j−1)` for each qubit `j` (1-based).
pub fn swap_bound_checks(movement_per_qubit: &[f64], eps: f64, what: &str) -> Vec<BoundCheck> {
    movement_per_qubit
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            BoundCheck::new(
                format!("‖S'_{} − S_{}‖ ≤ 2ε(j−1), ε = {what}", j + 1, j + 1),
                m,
                2.0 * eps * j as f64 + 1e-12,
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{perturbed_paulis, standard_paulis};
    use crate::matrix::C64;
    use crate::state::StateVector;

    #[test]
    fn swap_exchanges_states() {
        let pair = standard_paulis(1).pair(0).clone();
        let s = swap_operator(&pair, 0, 1);
        let psi = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let phi = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let kron = |a: &[C64], b: &[C64]| -> Vec<C64> {
            a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
        };
        let out = s.apply(&kron(&psi, &phi));
        let expected = kron(&phi, &psi);
        for (a, b) in out.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!(StateVector::new(out).is_ok());
    }

    #[test]
    fn independent_input_moves_nothing() {
        let r = swap_separate(&standard_paulis(3)).unwrap();
        assert!(r.report.max_movement < 1e-14);
        assert!(r.report.all_pass(), "{:?}", r.report.checks);
        assert_eq!(r.movement_per_qubit[0], 0.0);
    }

    #[test]
    fn perturbed_input_obeys_bound() {
        let s = perturbed_paulis(3, 0.05, 2).unwrap();
        let r = swap_separate(&s).unwrap();
        assert_eq!(r.movement_per_qubit[0], 0.0);
        assert!(r.report.all_pass(), "{:?}", r.report.checks);
        assert_eq!(r.system.dim(), 64);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            swap_separate(&standard_paulis(6)),
            Err(Error::MemoryBudget { .. })
        ));
    }
}
