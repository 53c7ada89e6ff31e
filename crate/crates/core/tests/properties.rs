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

//! Randomised invariants of the operator library.

use overlap_core::fixtures::{perturbed_paulis, standard_paulis};
use overlap_core::protocol::{
    epr_lift, kcommute_construct, nqubit_test_exact, pairwise_test_detailed, rank_certificate,
};
use overlap_core::random::{
    haar_unitary_with, random_hermitian, random_reflection_matrix, random_state, random_state_with,
    substream,
};
use overlap_core::spectral::{eigenvalues, round_with_distance};
use overlap_core::{
    operator_norm, tensor_normal_form, ComplexMatrix, Eigh, HermitianOperator, QubitPair,
    QubitSystem, Reflection, SpectrumTarget,
};
use proptest::prelude::*;

fn conj(u: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    (&(u * m) * &u.adjoint()).hermitian_part()
}

fn norm(m: &ComplexMatrix) -> f64 {
    operator_norm(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commutator_at_most_twice_product(seed: u64, dim in 2usize..=16) {
        let mut rng = substream(seed, "commutator");
        let a = random_hermitian(&mut rng, dim).into_matrix().scale_real(3.0);
        let b = random_hermitian(&mut rng, dim).into_matrix();
        let c = norm(&ComplexMatrix::commutator(&a, &b));
        prop_assert!(c <= 2.0 * norm(&a) * norm(&b) * (1.0 + 1e-12));
    }

    #[test]
    fn rounding_is_idempotent_and_nearest(seed: u64, dim in 2usize..=12, reflect: bool) {
        let target = if reflect { SpectrumTarget::Sign } else { SpectrumTarget::Binary };
        let mut rng = substream(seed, "rounding");
        let h = random_hermitian(&mut rng, dim);
        let (r, d) = round_with_distance(&h, target).unwrap();
        let (rr, dd) = round_with_distance(&r, target).unwrap();
        prop_assert!(rr.matrix().max_abs_diff(r.matrix()) < 1e-12);
        prop_assert!(dd < 1e-12);
        prop_assert!((d - norm(&(h.matrix() - r.matrix()))).abs() < 1e-12);

        // Any other assignment of target values on the same eigenvectors is
        // no closer.
        let Eigh { values, vectors } = overlap_core::eigh(&h).unwrap();
        let (lo, hi) = if reflect { (-1.0, 1.0) } else { (0.0, 1.0) };
        for flip in 0..dim {
            let diag: Vec<f64> = values
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let nearest = if (v - lo).abs() < (v - hi).abs() { lo } else { hi };
                    if i == flip { lo + hi - nearest } else { nearest }
                })
                .collect();
            let other = conj(&vectors, &ComplexMatrix::from_real_diagonal(&diag));
            prop_assert!(norm(&(h.matrix() - &other)) >= d - 1e-12);
        }
    }

    #[test]
    fn bhatia_davis_kittaneh(seed: u64, dim in 2usize..=10) {
        let mut rng = substream(seed, "bdk");
        let a = random_hermitian(&mut rng, dim).into_matrix();
        let b = random_hermitian(&mut rng, dim).into_matrix();
        let g = random_hermitian(&mut rng, dim).into_matrix();
        let shift = ComplexMatrix::identity(dim).scale_real(0.05);
        let gamma = &(&g * &g) + &shift;
        let lmin = eigenvalues(&HermitianOperator::new(gamma.hermitian_part()).unwrap()).unwrap()[0];
        let rhs = norm(&(&(&a * &gamma) - &(&gamma * &b))) / lmin;
        prop_assert!(norm(&(&a - &b)) <= rhs * (1.0 + 1e-9));
    }

    #[test]
    fn exact_pairs_split_evenly(seed: u64, n in 1usize..=3) {
        let mut rng = substream(seed, "normal_form");
        let u = haar_unitary_with(&mut rng, 1 << n);
        let pairs = standard_paulis(n)
            .pairs()
            .iter()
            .map(|p| QubitPair::from_matrices(conj(&u, p.x().matrix()), conj(&u, p.z().matrix())))
            .collect::<Result<Vec<_>, _>>()
            .unwrap();
        for p in &pairs {
            prop_assert!(p.z().to_projection().rank() * 2 == p.dim());
            prop_assert!(tensor_normal_form(p).is_ok());
        }
    }

    #[test]
    fn pairwise_closed_form_matches_channel(seed: u64, dim in 2usize..=16) {
        let mut rng = substream(seed, "pairwise");
        let s = Reflection::from_matrix(random_reflection_matrix(&mut rng, dim)).unwrap();
        let t = Reflection::from_matrix(random_reflection_matrix(&mut rng, dim)).unwrap();
        let psi = random_state_with(&mut rng, dim);
        let o = pairwise_test_detailed(&s, &t, &psi).unwrap();
        prop_assert!((o.closed_form - o.channel).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn perturbed_commutator_inequality(seed: u64, log_dim in 2u32..=4) {
        let dim = 1usize << log_dim;
        let mut rng = substream(seed, "perturbed_commutator");
        let u = haar_unitary_with(&mut rng, dim);
        let spread: f64 = rand::Rng::gen_range(&mut rng, 0.0..0.45);
        let diag: Vec<f64> = (0..dim)
            .map(|i| {
                let base = (i % 2) as f64;
                base + spread * (rand::Rng::gen::<f64>(&mut rng) - 0.5)
            })
            .collect();
        let q_prime = HermitianOperator::new(conj(&u, &ComplexMatrix::from_real_diagonal(&diag))).unwrap();
        let (q, d) = round_with_distance(&q_prime, SpectrumTarget::Binary).unwrap();
        prop_assume!(d < 0.5);
        let p = random_hermitian(&mut rng, dim).into_matrix();
        let lhs = norm(&ComplexMatrix::commutator(q.matrix(), &p));
        let rhs = norm(&ComplexMatrix::commutator(q_prime.matrix(), &p)) / (1.0 - 2.0 * d);
        prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn independent_qubits_always_accept(seed: u64, n in 1usize..=3) {
        let mut rng = substream(seed, "complete");
        let u = haar_unitary_with(&mut rng, 1 << n);
        let pairs = standard_paulis(n)
            .pairs()
            .iter()
            .map(|p| QubitPair::from_matrices(conj(&u, p.x().matrix()), conj(&u, p.z().matrix())))
            .collect::<Result<Vec<_>, _>>()
            .unwrap();
        let system = QubitSystem::new(pairs).unwrap();
        let psi = random_state(1 << n, seed);
        let r = nqubit_test_exact(&system, &psi).unwrap();
        prop_assert!((r.acceptance_exact - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lifted_families_obey_their_bounds(seed: u64, strength in 0.0f64..0.5) {
        let system = perturbed_paulis(2, strength, seed).unwrap();
        let psi = random_state(4, seed);
        let cert = rank_certificate(&epr_lift(&system, &psi).unwrap()).unwrap();
        for c in cert.checks.iter() {
            prop_assert!(!c.violated(), "{c:?}");
        }
    }
}

#[test]
fn truncated_systems_fit_below_tensor_dimension() {
    for n in 4..=7 {
        let kc = kcommute_construct(n, 2).unwrap();
        assert!(kc.system.dim() < 1 << n, "n = {n}");
        assert!(kc.max_pairwise_residual < 1e-14);
    }
}
