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

//! Packing many nearly independent qubits into `2^n` dimensions.
//!
//! Both constructions start from random nearly orthogonal unit vectors. The
//! Clifford construction turns orthonormal triples in `R^{2n}` into
//! `X = iEF`, `Z = iEG` with `E, F, G` linear combinations of Clifford
//! generators. The exterior construction turns orthonormal pairs `(u, v)` in
//! `R^n` into fermionic bilinears on `Λ(R^n)`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, I};
use crate::operator::Reflection;
use crate::pauli::{pauli_string, Pauli};
use crate::qubit::{QubitPair, QubitSystem};
use crate::random::substream;

const DEGENERATE: f64 = 1e-8;
const MAX_RESAMPLES: usize = 64;

/// How [`jl_pack`] orthonormalises its samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orthogonalize {
    /// Normalise only.
    None,
    /// Gram–Schmidt within consecutive groups of the given size.
    Groups(usize),
    /// Gram–Schmidt across the whole family (needs `m ≤ d`).
    All,
}

/// Real unit vectors with their largest pairwise `|⟨u_i, u_j⟩|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitVectorFamily {
    pub ambient_dim: usize,
    pub vectors: Vec<Vec<f64>>,
    pub max_coherence: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl UnitVectorFamily {
    pub fn new(ambient_dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        for v in &vectors {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    left: ambient_dim,
                    right: v.len(),
                });
            }
            let n = norm(v);
            if (n - 1.0).abs() > 1e-12 {
                return Err(Error::NotNormalized { norm: n });
            }
        }
        let mut max_coherence = 0.0f64;
        for i in 0..vectors.len() {
            for j in i + 1..vectors.len() {
                max_coherence = max_coherence.max(dot(&vectors[i], &vectors[j]).abs());
            }
        }
        Ok(Self {
            ambient_dim,
            vectors,
            max_coherence,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Gram–Schmidt in place, twice for stability. Returns `false` if some
/// vector is numerically dependent on the previous ones.
fn gram_schmidt(vs: &mut [Vec<f64>]) -> bool {
    for k in 0..vs.len() {
        let (done, rest) = vs.split_at_mut(k);
        let v = &mut rest[0];
        for _ in 0..2 {
            for u in done.iter() {
                let c = dot(u, v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
            }
        }
        let n = norm(v);
        if n < DEGENERATE {
            return false;
        }
        v.iter_mut().for_each(|x| *x /= n);
    }
    true
}

/// `m` Gaussian samples in `R^d`, normalised and optionally orthonormalised.
///
/// A group that comes out degenerate is redrawn from the next substream.
pub fn jl_pack_with(d: usize, m: usize, seed: u64, mode: Orthogonalize) -> Result<UnitVectorFamily> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidInput(format!("jl_pack needs d, m ≥ 1 (got {d}, {m})")));
    }
    let group = match mode {
        Orthogonalize::None => 1,
        Orthogonalize::Groups(g) => g.max(1),
        Orthogonalize::All => m,
    };
    if group > d {
        return Err(Error::Precondition(format!(
            "cannot orthonormalise {group} vectors in R^{d}"
        )));
    }
    let mut vectors = Vec::with_capacity(m);
    let mut g = 0;
    while vectors.len() < m {
        let size = group.min(m - vectors.len());
        let mut accepted = None;
        for attempt in 0..MAX_RESAMPLES {
            let mut rng = substream(seed, &format!("jl/{g}/{attempt}"));
            let mut block: Vec<Vec<f64>> = (0..size)
                .map(|_| (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
                .collect();
            if gram_schmidt(&mut block) {
                accepted = Some(block);
                break;
            }
        }
        let block = accepted.ok_or_else(|| {
            Error::Structural(format!("group {g} stayed degenerate after {MAX_RESAMPLES} draws"))
        })?;
        vectors.extend(block);
        g += 1;
    }
    UnitVectorFamily::new(d, vectors)
}

/// `m` normalised Gaussian vectors in `R^d`.
pub fn jl_pack(d: usize, m: usize, seed: u64) -> Result<UnitVectorFamily> {
    jl_pack_with(d, m, seed, Orthogonalize::None)
}

/// Jordan–Wigner generators `C_1, …, C_{2n}` on `(C²)^{⊗n}`.
#[derive(Debug, Clone)]
pub struct CliffordRep {
    pub n: usize,
    pub generators: Vec<Reflection>,
}

pub const MAX_CLIFFORD_N: usize = 13;

/// `C_{2k−1} = σ^z ⊗ … ⊗ σ^z ⊗ σ^x ⊗ I …` and `C_{2k}` likewise with `σ^y`,
/// with `k − 1` leading `σ^z` factors.
pub fn clifford_generators(n: usize) -> Result<CliffordRep> {
    if !(1..=MAX_CLIFFORD_N).contains(&n) {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: format!("[1, {MAX_CLIFFORD_N}]"),
        });
    }
    let mut generators = Vec::with_capacity(2 * n);
    for k in 0..n {
        for p in [Pauli::X, Pauli::Y] {
            let mut s = vec![Pauli::I; n];
            s[..k].fill(Pauli::Z);
            s[k] = p;
            generators.push(Reflection::from_matrix(pauli_string(&s))?);
        }
    }
    Ok(CliffordRep { n, generators })
}

impl CliffordRep {
    /// `Σ_k c_k C_k`.
    pub fn combination(&self, coeffs: &[f64]) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let mut out = ComplexMatrix::zeros(dim);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            if *c != 0.0 {
                out = &out + &g.matrix().scale_real(*c);
            }
        }
        out
    }

    /// `max_{i,j} max-entry |{C_i, C_j} − 2δ_{ij} I|`.
    pub fn car_defect(&self) -> f64 {
        let dim = 1usize << self.n;
        let id2 = ComplexMatrix::identity(dim).scale_real(2.0);
        let zero = ComplexMatrix::zeros(dim);
        let mut worst = 0.0f64;
        for i in 0..self.generators.len() {
            for j in i..self.generators.len() {
                let ac = ComplexMatrix::anticommutator(
                    self.generators[i].matrix(),
                    self.generators[j].matrix(),
                );
                worst = worst.max(ac.max_abs_diff(if i == j { &id2 } else { &zero }));
            }
        }
        worst
    }
}

/// The exterior algebra `Λ(R^n)`. The subset `S ⊆ {0, …, n−1}` has index
/// `Σ_{s∈S} 2^{n−1−s}`, so element `0` is the most significant bit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExteriorBasis {
    pub n: usize,
}

impl ExteriorBasis {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=MAX_CLIFFORD_N).contains(&n) {
            return Err(Error::OutOfRange {
                name: "n",
                value: n as f64,
                range: format!("[1, {MAX_CLIFFORD_N}]"),
            });
        }
        Ok(Self { n })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn bit(&self, element: usize) -> usize {
        1 << (self.n - 1 - element)
    }

    pub fn index(&self, subset: &[usize]) -> usize {
        subset.iter().map(|&s| self.bit(s)).sum()
    }

    pub fn subset(&self, index: usize) -> Vec<usize> {
        (0..self.n).filter(|&e| index & self.bit(e) != 0).collect()
    }

    /// `e_k ∧ ·` on basis state `index`: `None` if `k ∈ S`, otherwise the
    /// target index and the sign `(−1)^{|{s ∈ S : s < k}|}`.
    pub fn create(&self, k: usize, index: usize) -> Option<(usize, f64)> {
        if index & self.bit(k) != 0 {
            return None;
        }
        let below = (0..k).filter(|&s| index & self.bit(s) != 0).count();
        let sign = if below % 2 == 0 { 1.0 } else { -1.0 };
        Some((index | self.bit(k), sign))
    }
}

/// `(a_v, a_v†)` with `a_v† w = v ∧ w`.
pub fn fermion_ops(basis: &ExteriorBasis, v: &[f64]) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if v.len() != basis.n {
        return Err(Error::DimensionMismatch {
            left: basis.n,
            right: v.len(),
        });
    }
    let nv = norm(v);
    if (nv - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { norm: nv });
    }
    let dim = basis.dim();
    let mut adag = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        for (k, &c) in v.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if let Some((row, sign)) = basis.create(k, col) {
                let cur = adag.get(row, col);
                adag.set(row, col, cur + C64::new(sign * c, 0.0));
            }
        }
    }
    Ok((adag.adjoint(), adag))
}

/// Which construction produced a [`PackingResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Clifford,
    Exterior,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PackingOptions {
    /// Orthonormalise the whole vector family, forcing zero overlap.
    pub orthogonalize_all: bool,
}

#[derive(Debug, Clone)]
pub struct PackingResult {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub construction: Construction,
    pub system: QubitSystem,
    pub vector_family: UnitVectorFamily,
    pub epsilon_achieved: f64,
}

/// Serializable summary of a [`PackingResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub construction: Construction,
    pub epsilon_achieved: f64,
    pub overlap_matrix: Vec<Vec<f64>>,
    pub max_overlap: f64,
    /// `max_overlap / epsilon_achieved`, absent when ε is zero.
    pub overlap_ratio: Option<f64>,
}

impl PackingResult {
    pub fn report(&self) -> Result<PackingReport> {
        let o = self.system.overlap_matrix()?;
        let max_overlap = o.max_off_diagonal();
        Ok(PackingReport {
            n: self.n,
            m: self.m,
            seed: self.seed,
            construction: self.construction,
            epsilon_achieved: self.epsilon_achieved,
            overlap_matrix: o.rows(),
            max_overlap,
            overlap_ratio: (self.epsilon_achieved > 0.0).then(|| max_overlap / self.epsilon_achieved),
        })
    }
}

fn family(d: usize, count: usize, group: usize, seed: u64, opts: PackingOptions) -> Result<UnitVectorFamily> {
    let mode = if opts.orthogonalize_all {
        Orthogonalize::All
    } else {
        Orthogonalize::Groups(group)
    };
    jl_pack_with(d, count, seed, mode)
}

/// Clifford packing of `m` qubits into `2^n` dimensions.
pub fn pack_clifford(n: usize, m: usize, seed: u64, opts: PackingOptions) -> Result<PackingResult> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let rep = clifford_generators(n)?;
    let vf = family(2 * n, 3 * m, 3, seed, opts)?;
    let pairs = (0..m)
        .into_par_iter()
        .map(|j| {
            let e = rep.combination(&vf.vectors[3 * j]);
            let f = rep.combination(&vf.vectors[3 * j + 1]);
            let g = rep.combination(&vf.vectors[3 * j + 2]);
            let x = (&e * &f).scale(I);
            let z = (&e * &g).scale(I);
            QubitPair::from_matrices(x, z)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PackingResult {
        n,
        m,
        seed,
        construction: Construction::Clifford,
        epsilon_achieved: vf.max_coherence,
        system: QubitSystem::new(pairs)?,
        vector_family: vf,
    })
}

/// Exterior-algebra packing of `m` qubits into `2^n` dimensions:
/// `X = (a_u† − a_u)(a_v + a_v†)`, `Z = 2 a_v a_v† − I`.
pub fn pack_exterior(n: usize, m: usize, seed: u64, opts: PackingOptions) -> Result<PackingResult> {
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let basis = ExteriorBasis::new(n)?;
    let vf = family(n, 2 * m, 2, seed, opts)?;
    let id = ComplexMatrix::identity(basis.dim());
    let pairs = (0..m)
        .into_par_iter()
        .map(|j| {
            let (au, au_dag) = fermion_ops(&basis, &vf.vectors[2 * j])?;
            let (av, av_dag) = fermion_ops(&basis, &vf.vectors[2 * j + 1])?;
            let x = &(&au_dag - &au) * &(&av + &av_dag);
            let z = &(&av * &av_dag).scale_real(2.0) - &id;
            QubitPair::from_matrices(x, z)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PackingResult {
        n,
        m,
        seed,
        construction: Construction::Exterior,
        epsilon_achieved: vf.max_coherence,
        system: QubitSystem::new(pairs)?,
        vector_family: vf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ZERO;
    use crate::random::substream;

    fn unit(n: usize, k: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        v
    }

    fn random_unit(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = substream(seed, "unit");
        let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let s = norm(&v);
        v.iter_mut().for_each(|x| *x /= s);
        v
    }

    #[test]
    fn jl_orthogonalised_family_has_zero_coherence() {
        for seed in 0..5 {
            let f = jl_pack_with(4, 4, seed, Orthogonalize::All).unwrap();
            assert!(f.max_coherence < 1e-14);
        }
    }

    #[test]
    fn jl_is_deterministic() {
        assert_eq!(jl_pack(64, 12, 3).unwrap(), jl_pack(64, 12, 3).unwrap());
        assert_ne!(jl_pack(64, 12, 3).unwrap(), jl_pack(64, 12, 4).unwrap());
    }

    #[test]
    fn jl_coherence_quantile_in_64_dims() {
        let below = (0..1000)
            .filter(|&s| jl_pack(64, 12, s).unwrap().max_coherence < 0.6)
            .count();
        assert!(below >= 990, "{below}/1000");
    }

    #[test]
    fn clifford_single_qubit() {
        let rep = clifford_generators(1).unwrap();
        assert_eq!(rep.generators[0].matrix(), &Pauli::X.matrix());
        assert_eq!(rep.generators[1].matrix(), &Pauli::Y.matrix());
        assert_eq!(rep.car_defect(), 0.0);
    }

    #[test]
    fn clifford_car_relations_exhaustive() {
        let rep = clifford_generators(2).unwrap();
        let c3 = pauli_string(&[Pauli::Z, Pauli::X]);
        assert_eq!(rep.generators[2].matrix(), &c3);
        let ac = ComplexMatrix::anticommutator(rep.generators[0].matrix(), &c3);
        assert_eq!(ac.max_abs_entry(), 0.0);
        for n in 1..=6 {
            assert!(clifford_generators(n).unwrap().car_defect() < 1e-14);
        }
        assert!(clifford_generators(0).is_err());
        assert!(clifford_generators(14).is_err());
    }

    #[test]
    fn exterior_creation_on_basis_vector() {
        let b = ExteriorBasis::new(2).unwrap();
        let (_, adag) = fermion_ops(&b, &unit(2, 0)).unwrap();
        let empty = b.index(&[]);
        let one = b.index(&[0]);
        assert_eq!(adag.get(one, empty), C64::new(1.0, 0.0));
        assert!((0..4).all(|r| adag.get(r, one) == ZERO));
        assert!(fermion_ops(&b, &[1.0, 1.0]).is_err());
    }

    #[test]
    fn fermion_relations_on_random_vectors() {
        for n in 1..=6 {
            let b = ExteriorBasis::new(n).unwrap();
            let u = random_unit(n, n as u64);
            let v = random_unit(n, 100 + n as u64);
            let (au, au_dag) = fermion_ops(&b, &u).unwrap();
            let (av, av_dag) = fermion_ops(&b, &v).unwrap();
            let id = ComplexMatrix::identity(b.dim());
            assert!(ComplexMatrix::anticommutator(&au, &av).max_abs_entry() < 1e-12);
            assert!(ComplexMatrix::anticommutator(&au_dag, &av_dag).max_abs_entry() < 1e-12);
            assert!(ComplexMatrix::anticommutator(&av, &av_dag).max_abs_diff(&id) < 1e-12);
            let uv = dot(&u, &v);
            let car = ComplexMatrix::anticommutator(&au, &av_dag);
            assert!(car.max_abs_diff(&id.scale_real(uv)) < 1e-12);
            assert!((&av * &av).max_abs_entry() < 1e-12);
        }
    }

    /// Induced rotation on `Λ(R^n)`: entry `(T, S)` is `det R[T, S]`.
    fn induced_rotation(b: &ExteriorBasis, r: &[Vec<f64>]) -> ComplexMatrix {
        fn det(m: Vec<Vec<f64>>) -> f64 {
            let k = m.len();
            if k == 0 {
                return 1.0;
            }
            let mut a = m;
            let mut d = 1.0;
            for c in 0..k {
                let p = (c..k).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
                if a[p][c] == 0.0 {
                    return 0.0;
                }
                if p != c {
                    a.swap(p, c);
                    d = -d;
                }
                d *= a[c][c];
                for i in c + 1..k {
                    let f = a[i][c] / a[c][c];
                    for j in c..k {
                        a[i][j] -= f * a[c][j];
                    }
                }
            }
            d
        }
        ComplexMatrix::from_fn(b.dim(), |row, col| {
            let t = b.subset(row);
            let s = b.subset(col);
            if t.len() != s.len() {
                return ZERO;
            }
            let minor = t.iter().map(|&i| s.iter().map(|&j| r[i][j]).collect()).collect();
            C64::new(det(minor), 0.0)
        })
    }

    #[test]
    fn fermion_ops_are_basis_independent() {
        let n = 4;
        let b = ExteriorBasis::new(n).unwrap();
        let f = jl_pack_with(n, n, 8, Orthogonalize::All).unwrap();
        // Rows of an orthogonal matrix; R_{ij} = f_j[i].
        let r: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f.vectors[j][i]).collect()).collect();
        let rhat = induced_rotation(&b, &r);
        let v = random_unit(n, 77);
        let rv: Vec<f64> = (0..n).map(|i| dot(&r[i], &v)).collect();
        let (a_v, a_v_dag) = fermion_ops(&b, &v).unwrap();
        let (a_rv, a_rv_dag) = fermion_ops(&b, &rv).unwrap();
        assert!((&a_rv_dag * &rhat).max_abs_diff(&(&rhat * &a_v_dag)) < 1e-10);
        assert!((&a_rv * &rhat).max_abs_diff(&(&rhat * &a_v)) < 1e-10);
    }

    #[test]
    fn exterior_two_mode_matrices() {
        // u = e_1, v = e_2 in the basis ∅, {2}, {1}, {1,2}.
        let b = ExteriorBasis::new(2).unwrap();
        let (au, au_dag) = fermion_ops(&b, &unit(2, 0)).unwrap();
        let (av, av_dag) = fermion_ops(&b, &unit(2, 1)).unwrap();
        let x = &(&au_dag - &au) * &(&av + &av_dag);
        let z = &(&av * &av_dag).scale_real(2.0) - &ComplexMatrix::identity(4);
        assert_eq!(x, pauli_string(&[Pauli::X, Pauli::X]));
        assert_eq!(z, pauli_string(&[Pauli::I, Pauli::Z]));
        let au_expected = ComplexMatrix::from_fn(4, |i, j| match (i, j) {
            (0, 2) | (1, 3) => C64::new(1.0, 0.0),
            _ => ZERO,
        });
        let av_expected = ComplexMatrix::from_fn(4, |i, j| match (i, j) {
            (0, 1) => C64::new(1.0, 0.0),
            (2, 3) => C64::new(-1.0, 0.0),
            _ => ZERO,
        });
        assert_eq!(au, au_expected);
        assert_eq!(av, av_expected);
    }

    #[test]
    fn single_qubit_packings_are_exact() {
        let c = pack_clifford(3, 1, 5, PackingOptions::default()).unwrap();
        assert!(c.system.pair(0).anticomm_defect() < 1e-12);
        let e = pack_exterior(3, 1, 5, PackingOptions::default()).unwrap();
        assert!(e.system.pair(0).anticomm_defect() < 1e-12);
    }

    #[test]
    fn orthogonal_inputs_give_independent_qubits() {
        let opts = PackingOptions {
            orthogonalize_all: true,
        };
        let c = pack_clifford(3, 2, 1, opts).unwrap();
        assert!(c.report().unwrap().max_overlap < 1e-10);
        let e = pack_exterior(4, 2, 1, opts).unwrap();
        assert!(e.report().unwrap().max_overlap < 1e-10);
    }

    #[test]
    fn random_packings_respect_eight_epsilon() {
        let c = pack_clifford(5, 4, 2, PackingOptions::default()).unwrap();
        let r = c.report().unwrap();
        assert!(r.max_overlap <= 8.0 * r.epsilon_achieved, "{r:?}");
        let e = pack_exterior(6, 3, 2, PackingOptions::default()).unwrap();
        let r = e.report().unwrap();
        assert!(r.max_overlap <= 8.0 * r.epsilon_achieved, "{r:?}");
    }
}
