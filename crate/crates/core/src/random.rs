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

//! Seeded random fixtures.
//!
//! All randomness flows through [`substream`]: a ChaCha20 generator keyed by
//! the user seed, with the stream id derived from a text label. Distinct
//! labels give independent streams, so parallel work can draw from
//! `substream(seed, &format!("shot/{i}"))` without depending on scheduling.

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, C64};
use crate::operator::HermitianOperator;
use crate::state::StateVector;

/// 64-bit FNV-1a hash.
pub fn fnv1a(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

pub fn substream(seed: u64, label: &str) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(label));
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_state_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
        if let Ok(s) = StateVector::normalized(v) {
            return s;
        }
    }
}

/// Uniformly random unit vector in `C^dim`.
pub fn random_state(dim: usize, seed: u64) -> StateVector {
    random_state_with(&mut substream(seed, "random_state"), dim)
}

/// Haar unitary: QR of a complex Ginibre matrix with `R`'s diagonal phases
/// moved into `Q`.
pub fn haar_unitary_with<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = Mat::from_fn(dim, dim, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let q = qr.compute_Q();
    let r = qr.R();
    let phases: Vec<C64> = (0..dim)
        .map(|i| {
            let d = r[(i, i)];
            if d.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    ComplexMatrix::from_fn(dim, |i, j| q[(i, j)] * phases[j])
}

pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_with(&mut substream(seed, "haar_unitary"), dim)
}

/// `(G + G†)/2` for a complex Ginibre `G`, scaled to unit operator norm.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> HermitianOperator {
    let g = ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng));
    let h = g.hermitian_part();
    let n = crate::spectral::norm_of(&h).unwrap_or(1.0);
    let s = if n > 0.0 { 1.0 / n } else { 1.0 };
    HermitianOperator::from_parts_unchecked(h.scale_real(s))
}

/// Random reflection `U diag(±1) U†` with the number of `+1` entries uniform
/// in `0..=dim`.
pub fn random_reflection_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let plus = rng.gen_range(0..=dim);
    let signs: Vec<f64> = (0..dim).map(|i| if i < plus { 1.0 } else { -1.0 }).collect();
    let u = haar_unitary_with(rng, dim);
    let d = ComplexMatrix::from_real_diagonal(&signs);
    (&(&u * &d) * &u.adjoint()).hermitian_part()
}

/// Random rank-`rank` projection.
pub fn random_projection_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    rank: usize,
) -> ComplexMatrix {
    let u = haar_unitary_with(rng, dim);
    let d: Vec<f64> = (0..dim).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    (&(&u * &ComplexMatrix::from_real_diagonal(&d)) * &u.adjoint()).hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_state_is_deterministic() {
        assert_eq!(random_state(4, 9), random_state(4, 9));
        assert_ne!(random_state(4, 9), random_state(4, 10));
    }

    #[test]
    fn substreams_differ_by_label() {
        let a: u64 = substream(1, "a").gen();
        let b: u64 = substream(1, "b").gen();
        assert_ne!(a, b);
        let a2: u64 = substream(1, "a").gen();
        assert_eq!(a, a2);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = haar_unitary(8, 5);
        let uu = &u.adjoint() * &u;
        assert!(uu.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn haar_first_entry_second_moment() {
        // E|⟨0|U|0⟩|² = 1/d; |U_00|² is Beta(1, d−1) with variance
        // (d−1)/(d²(d+1)).
        let d = 4usize;
        let samples = 10_000;
        let mut rng = substream(17, "haar_moment");
        let mean = (0..samples)
            .map(|_| haar_unitary_with(&mut rng, d).get(0, 0).norm_sqr())
            .sum::<f64>()
            / samples as f64;
        let df = d as f64;
        let sigma = ((df - 1.0) / (df * df * (df + 1.0)) / samples as f64).sqrt();
        assert!((mean - 1.0 / df).abs() < 5.0 * sigma, "mean {mean}");
    }

    #[test]
    fn haar_commutator_mean_is_near_two() {
        // No concentration rate is asserted, only the sample mean.
        let d = 32usize;
        let mut rng = substream(23, "haar_commutator");
        let norms: Vec<f64> = (0..20)
            .map(|_| {
                let u = haar_unitary_with(&mut rng, d);
                let v = haar_unitary_with(&mut rng, d);
                crate::spectral::operator_norm(&ComplexMatrix::commutator(&u, &v)).unwrap()
            })
            .collect();
        let mean = norms.iter().sum::<f64>() / norms.len() as f64;
        assert!(norms.iter().all(|&x| x <= 2.0 + 1e-12));
        assert!(mean > 1.5, "mean {mean}");
    }
}
