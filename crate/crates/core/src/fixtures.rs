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

//! Reusable test systems.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operator::Projection;
use crate::pauli::{local, standard_pairs, Pauli};
use crate::qubit::{pair_unchecked, QubitPair, QubitSystem};
use crate::random::{random_hermitian, substream};
use crate::spectral::{expm_i, norm_of};

/// `(σ^x_j, σ^z_j)` on `(C²)^{⊗n}`.
pub fn standard_paulis(n: usize) -> QubitSystem {
    let pairs = standard_pairs(n)
        .into_iter()
        .map(|(x, z)| pair_unchecked(x, z))
        .collect();
    QubitSystem::new(pairs).expect("n ≥ 1")
}

fn conjugate(v: &ComplexMatrix, m: &ComplexMatrix) -> ComplexMatrix {
    (&(v * m) * &v.adjoint()).hermitian_part()
}

fn rotations(n: usize, strength: f64, seed: u64, label: &str) -> Result<Vec<ComplexMatrix>> {
    let dim = 1usize << n;
    (0..n)
        .map(|j| {
            let mut rng = substream(seed, &format!("{label}/{j}"));
            let g = random_hermitian(&mut rng, dim);
            expm_i(&g, strength)
        })
        .collect()
}

/// Pauli qubits each rotated by its own `V_j = exp(i·strength·G_j)` with
/// `G_j` a random unit-norm Hermitian on the full space. Every pair is exact;
/// overlaps are `O(strength)`.
pub fn perturbed_paulis(n: usize, strength: f64, seed: u64) -> Result<QubitSystem> {
    if n == 0 || n > 12 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: "[1, 12]".into(),
        });
    }
    let vs = rotations(n, strength, seed, "perturbed_paulis")?;
    let pairs = standard_pairs(n)
        .into_iter()
        .zip(&vs)
        .map(|((x, z), v)| QubitPair::from_matrices(conjugate(v, &x), conjugate(v, &z)))
        .collect::<Result<Vec<_>>>()?;
    QubitSystem::new(pairs)
}

/// `V_j(t) ½(I + σ^z_j) V_j(t)†` for the rotations of [`perturbed_paulis`].
pub fn perturbed_pauli_projections(n: usize, t: f64, seed: u64) -> Result<Vec<Projection>> {
    let dim = 1usize << n;
    let vs = rotations(n, t, seed, "perturbed_projections")?;
    let id = ComplexMatrix::identity(dim);
    (0..n)
        .map(|j| {
            let p = (&id + &local(Pauli::Z, j, n)).scale_real(0.5);
            Projection::from_matrix(conjugate(&vs[j], &p))
        })
        .collect()
}

pub fn max_pairwise_commutator(ps: &[Projection]) -> Result<f64> {
    let mut m = 0.0f64;
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            m = m.max(norm_of(&ComplexMatrix::commutator(
                ps[i].matrix(),
                ps[j].matrix(),
            ))?);
        }
    }
    Ok(m)
}

/// Perturbed Pauli projections whose largest pairwise commutator norm is
/// `eps` up to a relative `1e-6`, and never above it. The rotation strength
/// is found by bisection.
pub fn projections_with_overlap(n: usize, eps: f64, seed: u64) -> Result<Vec<Projection>> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "(0, 1)".into(),
        });
    }
    if n < 2 {
        return perturbed_pauli_projections(n, 0.0, seed);
    }
    let at = |t: f64| -> Result<(f64, Vec<Projection>)> {
        let ps = perturbed_pauli_projections(n, t, seed)?;
        Ok((max_pairwise_commutator(&ps)?, ps))
    };
    let (mut lo, mut hi) = (0.0f64, eps);
    let mut best = at(0.0)?.1;
    for _ in 0..40 {
        let (c, ps) = at(hi)?;
        if c >= eps {
            break;
        }
        lo = hi;
        best = ps;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (c, ps) = at(mid)?;
        if c <= eps {
            lo = mid;
            best = ps;
            if c >= eps * (1.0 - 1e-6) {
                break;
            }
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbed_paulis_are_exact_pairs_with_small_overlap() {
        let s = perturbed_paulis(3, 0.05, 1).unwrap();
        let o = s.overlap_matrix().unwrap().max_off_diagonal();
        assert!(o > 0.0 && o < 0.5, "overlap {o}");
        assert!(s.pairs().iter().all(|p| p.anticomm_defect() < 1e-12));
    }

    #[test]
    fn bisection_hits_target_overlap() {
        let ps = projections_with_overlap(3, 0.01, 4).unwrap();
        let c = max_pairwise_commutator(&ps).unwrap();
        assert!(c <= 0.01 && c >= 0.01 * (1.0 - 1e-5), "c = {c}");
    }
}
