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

//! Systems that pass weak state-dependent tests.

use serde::{Deserialize, Serialize};

use super::nqubit::{nqubit_test_exact, ProtocolReport};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::operator::HermitianOperator;
use crate::qubit::{Label, QubitPair, QubitSystem};
use crate::state::{vec_norm, StateVector};
use crate::tolerance;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Subsets of `0..n` of size `w`, as bitmasks, in lexicographic order of
/// their sorted elements.
fn combinations(n: usize, w: usize) -> Vec<u64> {
    fn go(start: usize, n: usize, left: usize, mask: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in start..=n - left {
            go(i + 1, n, left - 1, mask | (1 << i), out);
        }
    }
    let mut out = Vec::with_capacity(binomial(n, w));
    go(0, n, w, 0, &mut out);
    out
}

fn bits(mask: u64, n: usize) -> String {
    (0..n)
        .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// `n` qubits on strings of weight at most `k` for which every product of at
/// most `k` operators on distinct qubits acts on `|0^n⟩` in an
/// order-independent way.
#[derive(Debug, Clone)]
pub struct KCommute {
    pub n: usize,
    pub k: usize,
    pub system: QubitSystem,
    pub psi: StateVector,
    /// Basis labels: bit strings with qubit 1 leftmost, then `d` if padded.
    pub basis: Vec<String>,
    pub padded: bool,
    /// `max ‖[S_i, T_j]ψ‖` over `i ≠ j`.
    pub max_pairwise_residual: f64,
    /// Largest deviation between permuted products of `k` operators on `ψ`.
    pub max_permutation_residual: f64,
}

pub fn kcommute_construct(n: usize, k: usize) -> Result<KCommute> {
    if n == 0 || n > 24 {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: "[1, 24]".into(),
        });
    }
    if k == 0 || k > n {
        return Err(Error::OutOfRange {
            name: "k",
            value: k as f64,
            range: format!("[1, {n}]"),
        });
    }
    let strings: Vec<u64> = (0..=k).flat_map(|w| combinations(n, w)).collect();
    let padded = strings.len() % 2 == 1;
    let dim = strings.len() + usize::from(padded);
    if dim > tolerance::MAX_DIM {
        return Err(Error::DimensionTooLarge {
            dim,
            max: tolerance::MAX_DIM,
        });
    }
    let d = strings.len();
    let index: std::collections::HashMap<u64, usize> =
        strings.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let bit = 1u64 << j;
        let mut x = ComplexMatrix::zeros(dim);
        let mut z = vec![0.0; dim];
        let mut boundary = Vec::new();
        for (i, &s) in strings.iter().enumerate() {
            if s & bit == 0 && s.count_ones() as usize == k {
                boundary.push(i);
                continue;
            }
            x.set(i, index[&(s ^ bit)], C64::new(1.0, 0.0));
            z[i] = if s & bit == 0 { 1.0 } else { -1.0 };
        }
        if padded {
            boundary.push(d);
        }
        if boundary.len() % 2 == 1 {
            return Err(Error::Structural(format!(
                "qubit {j}: boundary set has odd size {}",
                boundary.len()
            )));
        }
        for pair in boundary.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            x.set(a, b, C64::new(1.0, 0.0));
            x.set(b, a, C64::new(1.0, 0.0));
            z[a] = 1.0;
            z[b] = -1.0;
        }
        let pair = QubitPair::from_matrices(x, ComplexMatrix::from_real_diagonal(&z))
            .map_err(|e| Error::Structural(format!("qubit {j}: {e}")))?;
        pairs.push(pair);
    }
    let system = QubitSystem::new(pairs)?;
    let psi = StateVector::basis(dim, 0);

    let mut basis: Vec<String> = strings.iter().map(|&s| bits(s, n)).collect();
    if padded {
        basis.push("d".into());
    }
    let max_pairwise_residual = pairwise_residual(&system, &psi);
    let max_permutation_residual = permutation_residual(&system, &psi, k);
    Ok(KCommute {
        n,
        k,
        system,
        psi,
        basis,
        padded,
        max_pairwise_residual,
        max_permutation_residual,
    })
}

fn pairwise_residual(system: &QubitSystem, psi: &StateVector) -> f64 {
    let n = system.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for s in Label::BOTH {
                for t in Label::BOTH {
                    let c = ComplexMatrix::commutator(
                        system.pair(i).get(s).matrix(),
                        system.pair(j).get(t).matrix(),
                    );
                    worst = worst.max(vec_norm(&c.apply(psi.amplitudes())));
                }
            }
        }
    }
    worst
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// Over every set of `k` distinct qubits and every label assignment, the
/// largest `‖Π_σ ψ − Π_id ψ‖` across orderings `σ`.
fn permutation_residual(system: &QubitSystem, psi: &StateVector, k: usize) -> f64 {
    let n = system.n();
    let perms = permutations(k);
    let mut worst = 0.0f64;
    for set in combinations(n, k) {
        let qubits: Vec<usize> = (0..n).filter(|&i| set >> i & 1 == 1).collect();
        for labels in 0..1u32 << k {
            let ops: Vec<&ComplexMatrix> = qubits
                .iter()
                .enumerate()
                .map(|(t, &q)| {
                    let l = if labels >> t & 1 == 0 { Label::X } else { Label::Z };
                    system.pair(q).get(l).matrix()
                })
                .collect();
            let product = |order: &[usize]| {
                order
                    .iter()
                    .rev()
                    .fold(psi.amplitudes().to_vec(), |v, &t| ops[t].apply(&v))
            };
            let reference = product(&perms[0]);
            for p in &perms[1..] {
                let v = product(p);
                let diff: Vec<C64> = v.iter().zip(&reference).map(|(a, b)| a - b).collect();
                worst = worst.max(vec_norm(&diff));
            }
        }
    }
    worst
}

/// Three nearly commuting 4×4 operators whose block-diagonalization with
/// respect to the first breaks commutation on `ψ = e₀` at first order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counterexample {
    pub delta: f64,
    pub p: HermitianOperator,
    pub q: HermitianOperator,
    pub r: HermitianOperator,
    pub psi: StateVector,
    /// `‖[P,Q]ψ‖`.
    pub pq_on_state: f64,
    /// `‖[P,R]ψ‖`.
    pub pr_on_state: f64,
    /// `‖[Q,R]ψ‖`.
    pub qr_on_state: f64,
    /// `‖[PQP + (I−P)Q(I−P), PRP + (I−P)R(I−P)]ψ‖`.
    pub blockdiag_on_state: f64,
    /// `‖P² − P‖`.
    pub projection_defect: f64,
}

fn real(rows: [[f64; 4]; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(4, |i, j| C64::new(rows[i][j], 0.0))
}

pub fn blockdiag_counterexample(delta: f64) -> Result<Counterexample> {
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            range: "(0, 1/4)".into(),
        });
    }
    let h = 0.5;
    let p = real([
        [1.0, 0.0, 0.0, delta],
        [0.0, h, h, 0.0],
        [0.0, h, h, 0.0],
        [delta, 0.0, 0.0, 0.0],
    ]);
    let q = real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ]);
    let r = real([
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, h, h],
        [0.0, 0.0, h, h],
    ]);
    let psi = StateVector::basis(4, 0);
    let on_state = |a: &ComplexMatrix, b: &ComplexMatrix| {
        vec_norm(&ComplexMatrix::commutator(a, b).apply(psi.amplitudes()))
    };
    let id = ComplexMatrix::identity(4);
    let pc = &id - &p;
    let blockdiag = |a: &ComplexMatrix| &(&(&p * a) * &p) + &(&(&pc * a) * &pc);
    let (qb, rb) = (blockdiag(&q), blockdiag(&r));
    let projection_defect = crate::spectral::norm_of(&(&(&p * &p) - &p))?;
    Ok(Counterexample {
        delta,
        pq_on_state: on_state(&p, &q),
        pr_on_state: on_state(&p, &r),
        qr_on_state: on_state(&q, &r),
        blockdiag_on_state: on_state(&qb, &rb),
        projection_defect,
        p: HermitianOperator::new(p)?,
        q: HermitianOperator::new(q)?,
        r: HermitianOperator::new(r)?,
        psi,
    })
}

/// Empirical constants of the counterexample across several `δ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleScaling {
    pub deltas: Vec<f64>,
    /// `max_δ max(‖[P,Q]ψ‖, ‖[P,R]ψ‖)/δ`.
    pub c1: f64,
    /// `min_δ ‖[Q', R']ψ‖/δ`.
    pub c2: f64,
    /// `max_δ ‖P² − P‖/δ²`.
    pub c3: f64,
    /// Least-squares slope of `log ‖[Q', R']ψ‖` against `log δ`.
    pub blockdiag_slope: f64,
    /// `max_δ ‖[Q,R]ψ‖`.
    pub max_qr_on_state: f64,
}

pub fn counterexample_scaling(deltas: &[f64]) -> Result<CounterexampleScaling> {
    if deltas.len() < 2 {
        return Err(Error::InvalidInput("need at least two δ values".into()));
    }
    let all = deltas
        .iter()
        .map(|&d| blockdiag_counterexample(d))
        .collect::<Result<Vec<_>>>()?;
    let c1 = all
        .iter()
        .map(|c| c.pq_on_state.max(c.pr_on_state) / c.delta)
        .fold(0.0, f64::max);
    let c2 = all
        .iter()
        .map(|c| c.blockdiag_on_state / c.delta)
        .fold(f64::INFINITY, f64::min);
    let c3 = all
        .iter()
        .map(|c| c.projection_defect / (c.delta * c.delta))
        .fold(0.0, f64::max);
    let xs: Vec<f64> = all.iter().map(|c| c.delta.ln()).collect();
    let ys: Vec<f64> = all.iter().map(|c| c.blockdiag_on_state.ln()).collect();
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(CounterexampleScaling {
        deltas: deltas.to_vec(),
        c1,
        c2,
        c3,
        blockdiag_slope: sxy / sxx,
        max_qr_on_state: all.iter().map(|c| c.qr_on_state).fold(0.0, f64::max),
    })
}

/// Pauli qubits on `span{|x⟩ : x ≠ 0^n, 1^n}`, with `X_j` sending each string
/// whose flip would leave the space to its complement.
#[derive(Debug, Clone)]
pub struct RemarkSystem {
    pub n: usize,
    pub system: QubitSystem,
    /// Uniform superposition of the retained strings.
    pub psi: StateVector,
    pub protocol: ProtocolReport,
}

pub fn remark_construct(n: usize) -> Result<RemarkSystem> {
    if !(2..=8).contains(&n) {
        return Err(Error::OutOfRange {
            name: "n",
            value: n as f64,
            range: "[2, 8]".into(),
        });
    }
    let all = (1u64 << n) - 1;
    let dim = (1usize << n) - 2;
    let idx = |x: u64| (x - 1) as usize;
    let mut pairs = Vec::with_capacity(n);
    for j in 0..n {
        let bit = 1u64 << (n - 1 - j);
        let mut x = ComplexMatrix::zeros(dim);
        let z: Vec<f64> = (1..all)
            .map(|s| if s & bit == 0 { 1.0 } else { -1.0 })
            .collect();
        for s in 1..all {
            let mut t = s ^ bit;
            if t == 0 || t == all {
                t = all ^ s;
            }
            x.set(idx(t), idx(s), C64::new(1.0, 0.0));
        }
        let pair = QubitPair::from_matrices(x, ComplexMatrix::from_real_diagonal(&z))
            .map_err(|e| Error::Structural(format!("qubit {j}: {e}")))?;
        pairs.push(pair);
    }
    let system = QubitSystem::new(pairs)?;
    let psi = StateVector::normalized(vec![C64::new(1.0, 0.0); dim])?;
    let protocol = nqubit_test_exact(&system, &psi)?;
    Ok(RemarkSystem {
        n,
        system,
        psi,
        protocol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::pairwise_test;

    #[test]
    fn four_qubits_in_twelve_dimensions() {
        let kc = kcommute_construct(4, 2).unwrap();
        assert_eq!(kc.system.dim(), 12);
        assert!(kc.padded);
        let order = [
            "0000", "1000", "0100", "0010", "0001", "1100", "1010", "1001", "0110", "0101",
            "0011", "d",
        ];
        assert_eq!(kc.basis, order);
        assert!(kc.max_pairwise_residual < 1e-14);
        assert!(kc.max_permutation_residual < 1e-14);
    }

    #[test]
    fn first_qubit_matches_displayed_matrices() {
        let kc = kcommute_construct(4, 2).unwrap();
        let ones = [(0, 1), (2, 5), (3, 6), (4, 7), (8, 9), (10, 11)];
        let mut x = ComplexMatrix::zeros(12);
        for (a, b) in ones {
            x.set(a, b, C64::new(1.0, 0.0));
            x.set(b, a, C64::new(1.0, 0.0));
        }
        let z = ComplexMatrix::from_real_diagonal(&[
            1.0, -1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, 1.0, -1.0, 1.0, -1.0,
        ]);
        assert_eq!(kc.system.pair(0).x().matrix(), &x);
        assert_eq!(kc.system.pair(0).z().matrix(), &z);
    }

    #[test]
    fn pairwise_tests_accept_but_protocol_rejects() {
        let kc = kcommute_construct(4, 2).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i == j {
                    continue;
                }
                for s in Label::BOTH {
                    for t in Label::BOTH {
                        let p = pairwise_test(
                            kc.system.pair(i).get(s),
                            kc.system.pair(j).get(t),
                            &kc.psi,
                        )
                        .unwrap();
                        assert!((p - 1.0).abs() < 1e-12);
                    }
                }
            }
        }
        let r = nqubit_test_exact(&kc.system, &kc.psi).unwrap();
        assert!(r.acceptance_exact < 1.0 - 1e-3);
    }

    #[test]
    fn weight_three_truncation() {
        let kc = kcommute_construct(5, 3).unwrap();
        assert_eq!(kc.system.dim(), 26);
        assert!(!kc.padded);
        assert!(kc.max_permutation_residual < 1e-12);
    }

    #[test]
    fn full_weight_is_the_tensor_product() {
        let kc = kcommute_construct(3, 3).unwrap();
        assert_eq!(kc.system.dim(), 8);
        assert!(kc.system.overlap_matrix().unwrap().max_off_diagonal() < 1e-14);
    }

    #[test]
    fn counterexample_orders() {
        let s = counterexample_scaling(&[1e-2, 1e-3, 1e-4]).unwrap();
        assert_eq!(s.max_qr_on_state, 0.0);
        assert!(s.c2 > 0.1);
        assert!((s.blockdiag_slope - 1.0).abs() < 0.05);
        assert!(s.c3 <= 1.0 + 1e-9);
        assert!(s.c1 < 2.0);
    }

    #[test]
    fn remark_system_is_valid() {
        let r = remark_construct(4).unwrap();
        assert_eq!(r.system.dim(), 14);
        let a = r.protocol.acceptance_exact;
        assert!(a > 0.0 && a <= 1.0);
    }
}
