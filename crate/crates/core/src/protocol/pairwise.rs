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

//! Measure `S`, measure `T`, measure `S` again.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operator::Reflection;
use crate::state::{vec_norm, DensityOperator, StateVector};

/// Tolerance for the two evaluations of the pairwise test to agree.
const AGREEMENT: f64 = 1e-10;

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// `ρ ↦ ½(ρ + RρR)`, which equals `Π₊ρΠ₊ + Π₋ρΠ₋`.
pub(crate) fn dephase_matrix(rho: &ComplexMatrix, r: &ComplexMatrix) -> ComplexMatrix {
    let conj = &(r * rho) * r;
    (rho + &conj).scale_real(0.5).hermitian_part()
}

/// `Π ρ Π` for `Π = ½(I + sign·R)`.
pub(crate) fn compress(rho: &ComplexMatrix, r: &ComplexMatrix, sign: f64) -> ComplexMatrix {
    let p = (&ComplexMatrix::identity(r.dim()) + &r.scale_real(sign)).scale_real(0.5);
    (&(&p * rho) * &p).hermitian_part()
}

/// Measure `R` and forget the outcome.
pub fn dephase(rho: &DensityOperator, r: &Reflection) -> Result<DensityOperator> {
    check_dims(rho.dim(), r.dim())?;
    Ok(DensityOperator::from_matrix_unchecked(dephase_matrix(
        rho.matrix(),
        r.matrix(),
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairwiseOutcome {
    /// `1 − ‖[S,T]ψ‖²/8`.
    pub closed_form: f64,
    /// `Σ_a Tr[Π_a D_T(Π_a ρ Π_a)]`.
    pub channel: f64,
    /// `‖[S,T]ψ‖`.
    pub commutator_on_state: f64,
}

/// Both evaluations of the acceptance probability; errors if they disagree.
pub fn pairwise_test_detailed(
    s: &Reflection,
    t: &Reflection,
    psi: &StateVector,
) -> Result<PairwiseOutcome> {
    check_dims(s.dim(), t.dim())?;
    check_dims(s.dim(), psi.dim())?;
    let comm = ComplexMatrix::commutator(s.matrix(), t.matrix());
    let c = vec_norm(&comm.apply(psi.amplitudes()));
    let closed_form = 1.0 - c * c / 8.0;

    let rho = psi.density();
    let channel: f64 = [1.0, -1.0]
        .into_iter()
        .map(|a| {
            let after = dephase_matrix(&compress(rho.matrix(), s.matrix(), a), t.matrix());
            compress(&after, s.matrix(), a).trace().re
        })
        .sum();
    if (closed_form - channel).abs() > AGREEMENT {
        return Err(Error::Consistency {
            what: "pairwise acceptance: closed form vs channel".into(),
            lhs: closed_form,
            rhs: channel,
        });
    }
    Ok(PairwiseOutcome {
        closed_form,
        channel,
        commutator_on_state: c,
    })
}

/// Probability that the second `S` outcome repeats the first.
pub fn pairwise_test(s: &Reflection, t: &Reflection, psi: &StateVector) -> Result<f64> {
    pairwise_test_detailed(s, t, psi).map(|o| o.closed_form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;
    use crate::random::{random_reflection_matrix, random_state_with, substream};
    use crate::C64;

    fn refl(m: ComplexMatrix) -> Reflection {
        Reflection::from_matrix(m).unwrap()
    }

    #[test]
    fn plus_state_dephases_to_maximally_mixed() {
        let plus = StateVector::normalized(vec![C64::new(1.0, 0.0); 2]).unwrap();
        let out = dephase(&plus.density(), &refl(Pauli::Z.matrix())).unwrap();
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(out.matrix().max_abs_diff(&half) < 1e-15);
    }

    #[test]
    fn diagonal_state_is_fixed() {
        let rho = DensityOperator::from_matrix_unchecked(ComplexMatrix::from_real_diagonal(&[
            0.25, 0.75,
        ]));
        let out = dephase(&rho, &refl(Pauli::Z.matrix())).unwrap();
        assert_eq!(out.matrix(), rho.matrix());
    }

    #[test]
    fn dephasing_preserves_trace() {
        let mut rng = substream(1, "dephase");
        for _ in 0..20 {
            let psi = random_state_with(&mut rng, 6);
            let r = refl(random_reflection_matrix(&mut rng, 6));
            let out = dephase(&psi.density(), &r).unwrap();
            assert!((out.trace() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn x_then_z_on_zero_accepts_half() {
        let p = pairwise_test(
            &refl(Pauli::X.matrix()),
            &refl(Pauli::Z.matrix()),
            &StateVector::basis(2, 0),
        )
        .unwrap();
        assert!((p - 0.5).abs() < 1e-15);
    }

    #[test]
    fn commuting_reflections_accept() {
        let s = refl(ComplexMatrix::kron(&Pauli::X.matrix(), &Pauli::I.matrix()));
        let t = refl(ComplexMatrix::kron(&Pauli::I.matrix(), &Pauli::Z.matrix()));
        let mut rng = substream(2, "commuting");
        let psi = random_state_with(&mut rng, 4);
        assert!((pairwise_test(&s, &t, &psi).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn random_dim8_paths_agree() {
        let mut rng = substream(3, "dim8");
        for _ in 0..50 {
            let s = refl(random_reflection_matrix(&mut rng, 8));
            let t = refl(random_reflection_matrix(&mut rng, 8));
            let psi = random_state_with(&mut rng, 8);
            let o = pairwise_test_detailed(&s, &t, &psi).unwrap();
            assert!((o.closed_form - o.channel).abs() < 1e-12);
        }
    }
}
