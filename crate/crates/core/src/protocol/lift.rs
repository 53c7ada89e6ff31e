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

//! Swapping each qubit into half of a fresh EPR pair.
//!
//! The lifted space is `H ⊗ (C²)^{⊗2n}` with ancillas ordered
//! `1′, 1″, 2′, 2″, …`, the first most significant. Vectors are stored with
//! the `H` index outermost, and every operator is applied matrix-free.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nqubit::{nqubit_test_exact, ProtocolReport};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::operator::HermitianOperator;
use crate::qubit::{Label, QubitSystem};
use crate::random::{random_state, substream};
use crate::report::BoundCheck;
use crate::spectral::eigenvalues;
use crate::state::{inner, vec_norm, StateVector};

/// Largest `dim H · 4^n` accepted by [`epr_lift`].
pub const LIFT_BUDGET: usize = 1 << 16;
/// Largest `4^n · dim H · 4^n` accepted by [`rank_certificate`].
pub const RANK_BUDGET: usize = 1 << 24;

/// Residual allowed in the exact identities of the lift.
const LIFT_IDENTITY: f64 = 1e-10;

/// `αI + βX + γZ + δ(iXZ)` on one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleQubitOp {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub delta: C64,
}

impl SingleQubitOp {
    pub fn identity() -> Self {
        Self::from_matrix([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn pauli(label: Label) -> Self {
        let c = |on: bool| if on { ONE } else { ZERO };
        Self {
            alpha: ZERO,
            beta: c(label == Label::X),
            gamma: c(label == Label::Z),
            delta: ZERO,
        }
    }

    /// Coefficients of the 2×2 matrix `m` in the basis `I, σ^x, σ^z, σ^y`,
    /// using `iσ^xσ^z = σ^y`.
    pub fn from_matrix(m: [[C64; 2]; 2]) -> Self {
        Self {
            alpha: (m[0][0] + m[1][1]) * 0.5,
            gamma: (m[0][0] - m[1][1]) * 0.5,
            beta: (m[0][1] + m[1][0]) * 0.5,
            delta: (m[1][0] - m[0][1]) * 0.5 / I,
        }
    }

    /// Haar-random 2×2 unitary.
    pub fn random_unitary(seed: u64, label: &str) -> Self {
        let u = crate::random::haar_unitary_with(&mut substream(seed, label), 2);
        Self::from_matrix([[u.get(0, 0), u.get(0, 1)], [u.get(1, 0), u.get(1, 1)]])
    }

    pub fn matrix(&self) -> [[C64; 2]; 2] {
        let (a, b, g, d) = (self.alpha, self.beta, self.gamma, self.delta);
        [[a + g, b - I * d], [b + I * d, a - g]]
    }

    pub fn transpose(&self) -> Self {
        Self {
            delta: -self.delta,
            ..*self
        }
    }

    pub fn norm(&self) -> f64 {
        // Largest eigenvalue of M†M.
        let m = self.matrix();
        let p = m[0][0].norm_sqr() + m[1][0].norm_sqr();
        let r = m[0][1].norm_sqr() + m[1][1].norm_sqr();
        let q = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
        ((p + r) / 2.0 + (((p - r) / 2.0).powi(2) + q.norm_sqr()).sqrt()).sqrt()
    }

    fn on_pair(&self, x: &ComplexMatrix, z: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
        let id = ComplexMatrix::identity(x.dim());
        let terms = [
            id.scale(self.alpha),
            x.scale(self.beta),
            z.scale(self.gamma),
            y.scale(self.delta),
        ];
        terms.iter().skip(1).fold(terms[0].clone(), |a, t| &a + t)
    }
}

#[derive(Debug, Clone)]
struct Engine {
    n: usize,
    d: usize,
    anc: usize,
    x: Vec<ComplexMatrix>,
    z: Vec<ComplexMatrix>,
    /// `iXZ` per qubit.
    y: Vec<ComplexMatrix>,
}

impl Engine {
    fn len(&self) -> usize {
        self.d * self.anc
    }

    fn mask(&self, q: usize) -> usize {
        1 << (2 * self.n - 1 - q)
    }

    /// `(A ⊗ I) v`.
    fn apply_h(&self, a: &ComplexMatrix, v: &[C64]) -> Vec<C64> {
        let anc = self.anc;
        let mut out = vec![ZERO; v.len()];
        out.par_chunks_mut(anc).enumerate().for_each(|(h, row)| {
            for h2 in 0..self.d {
                let c = a.get(h, h2);
                if c == ZERO {
                    continue;
                }
                let src = &v[h2 * anc..(h2 + 1) * anc];
                row.iter_mut().zip(src).for_each(|(o, s)| *o += c * s);
            }
        });
        out
    }

    /// A 2×2 matrix on ancilla `q`.
    fn apply_anc(&self, m: [[C64; 2]; 2], q: usize, v: &[C64]) -> Vec<C64> {
        let mask = self.mask(q);
        (0..v.len())
            .map(|idx| {
                let b = usize::from(idx & mask != 0);
                let (lo, hi) = (idx & !mask, idx | mask);
                m[b][0] * v[lo] + m[b][1] * v[hi]
            })
            .collect()
    }

    /// Exchanges qubit `i` of `H` with ancilla `i′`.
    fn swap(&self, i: usize, v: &[C64]) -> Vec<C64> {
        let q = 2 * i;
        let paulis = [
            (&self.x[i], SingleQubitOp::pauli(Label::X).matrix()),
            (&self.z[i], SingleQubitOp::pauli(Label::Z).matrix()),
            (&self.y[i], sigma_y()),
        ];
        let mut out = v.to_vec();
        for (h_op, anc_op) in paulis {
            let w = self.apply_h(h_op, &self.apply_anc(anc_op, q, v));
            out.iter_mut().zip(&w).for_each(|(o, t)| *o += t);
        }
        out.iter_mut().for_each(|o| *o *= 0.5);
        out
    }

    /// `S_{1,n} v = S_1 ⋯ S_n v`.
    fn swap_down(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n).rev().fold(v.to_vec(), |w, i| self.swap(i, &w))
    }

    /// `S_{n,1} v = S_n ⋯ S_1 v`.
    fn swap_up(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n).fold(v.to_vec(), |w, i| self.swap(i, &w))
    }

    /// `Û_j v = S_{n,1} U_{j′} S_{1,n} v`.
    fn hat(&self, u: &SingleQubitOp, j: usize, v: &[C64]) -> Vec<C64> {
        self.swap_up(&self.apply_anc(u.matrix(), 2 * j, &self.swap_down(v)))
    }

    /// `U_j v` with `U_j` acting on `H`.
    fn on_system(&self, u: &SingleQubitOp, j: usize, v: &[C64]) -> Vec<C64> {
        self.apply_h(&u.on_pair(&self.x[j], &self.z[j], &self.y[j]), v)
    }
}

fn sigma_y() -> [[C64; 2]; 2] {
    [[ZERO, -I], [I, ZERO]]
}

fn diff_norm(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// `(H ⊗ (C²)^{⊗2n}, Ψ)` with exactly independent hat qubits.
#[derive(Debug, Clone)]
pub struct LiftedSystem {
    pub base: QubitSystem,
    pub psi: StateVector,
    /// `ψ ⊗ EPR^{⊗n}`.
    pub psi0: Vec<C64>,
    /// `S_n ⋯ S_1 Ψ₀`.
    pub psi_lifted: Vec<C64>,
    pub protocol: ProtocolReport,
    /// `max ‖[P̂_i, Q̂_j] v‖` over `i ≠ j`, `P, Q ∈ {X, Z}` and test vectors.
    pub hat_commutation_residual: f64,
    /// `max ‖Û_j Ψ − U^T_{j″} Ψ‖` over `U ∈ {X, Z, iXZ}`.
    pub switch_residual: f64,
    engine: Engine,
}

/// Serializable summary of a [`LiftedSystem`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftSummary {
    pub n: usize,
    pub dim_h: usize,
    pub lifted_dim: usize,
    pub psi_norm: f64,
    pub hat_commutation_residual: f64,
    pub switch_residual: f64,
    pub protocol: ProtocolReport,
}

impl LiftedSystem {
    pub fn n(&self) -> usize {
        self.engine.n
    }

    pub fn dim_h(&self) -> usize {
        self.engine.d
    }

    pub fn lifted_dim(&self) -> usize {
        self.engine.len()
    }

    /// Index of ancilla `j′` among the `2n` ancillas.
    pub fn primed(j: usize) -> usize {
        2 * j
    }

    /// Index of ancilla `j″`.
    pub fn double_primed(j: usize) -> usize {
        2 * j + 1
    }

    /// `Û_j v`.
    pub fn apply_hat(&self, u: &SingleQubitOp, j: usize, v: &[C64]) -> Vec<C64> {
        self.engine.hat(u, j, v)
    }

    /// `U_j v`.
    pub fn apply_system(&self, u: &SingleQubitOp, j: usize, v: &[C64]) -> Vec<C64> {
        self.engine.on_system(u, j, v)
    }

    /// `U^T_{j″} v`.
    pub fn apply_transposed_ancilla(&self, u: &SingleQubitOp, j: usize, v: &[C64]) -> Vec<C64> {
        self.engine
            .apply_anc(u.transpose().matrix(), Self::double_primed(j), v)
    }

    pub fn summary(&self) -> LiftSummary {
        LiftSummary {
            n: self.n(),
            dim_h: self.dim_h(),
            lifted_dim: self.lifted_dim(),
            psi_norm: vec_norm(&self.psi_lifted),
            hat_commutation_residual: self.hat_commutation_residual,
            switch_residual: self.switch_residual,
            protocol: self.protocol.clone(),
        }
    }
}

pub fn epr_lift(system: &QubitSystem, psi: &StateVector) -> Result<LiftedSystem> {
    let n = system.n();
    let d = system.dim();
    let anc = 1usize.checked_shl(2 * n as u32).unwrap_or(usize::MAX);
    let required = d.saturating_mul(anc);
    if n > 8 || required > LIFT_BUDGET {
        return Err(Error::MemoryBudget {
            required,
            limit: LIFT_BUDGET,
        });
    }
    let protocol = nqubit_test_exact(system, psi)?;
    let pairs = system.pairs();
    let engine = Engine {
        n,
        d,
        anc,
        x: pairs.iter().map(|p| p.x().matrix().clone()).collect(),
        z: pairs.iter().map(|p| p.z().matrix().clone()).collect(),
        y: pairs
            .iter()
            .map(|p| (p.x().matrix() * p.z().matrix()).scale(I))
            .collect(),
    };

    let amp = (0.5f64).powf(n as f64 / 2.0);
    let mut psi0 = vec![ZERO; required];
    for (h, &a) in psi.amplitudes().iter().enumerate() {
        for t in 0..anc {
            let epr = (0..n).all(|j| {
                let hi = t >> (2 * n - 1 - 2 * j) & 1;
                let lo = t >> (2 * n - 2 - 2 * j) & 1;
                hi == lo
            });
            if epr {
                psi0[h * anc + t] = a * amp;
            }
        }
    }
    let psi_lifted = engine.swap_up(&psi0);

    let transposed = |u: &SingleQubitOp, j: usize, v: &[C64]| {
        engine.apply_anc(u.transpose().matrix(), 2 * j + 1, v)
    };
    let y_op = SingleQubitOp::from_matrix(sigma_y());
    let mut switch_residual = 0.0f64;
    for j in 0..n {
        for u in [
            SingleQubitOp::pauli(Label::X),
            SingleQubitOp::pauli(Label::Z),
            y_op,
        ] {
            let lhs = engine.hat(&u, j, &psi_lifted);
            let rhs = transposed(&u, j, &psi_lifted);
            switch_residual = switch_residual.max(diff_norm(&lhs, &rhs));
        }
    }

    let probe = random_state(required, 0x11f7).into_amplitudes();
    let mut hat_commutation_residual = 0.0f64;
    for v in [&psi_lifted, &probe] {
        for i in 0..n {
            for j in i + 1..n {
                for p in Label::BOTH {
                    for q in Label::BOTH {
                        let (pi, qj) = (SingleQubitOp::pauli(p), SingleQubitOp::pauli(q));
                        let a = engine.hat(&pi, i, &engine.hat(&qj, j, v));
                        let b = engine.hat(&qj, j, &engine.hat(&pi, i, v));
                        hat_commutation_residual = hat_commutation_residual.max(diff_norm(&a, &b));
                    }
                }
            }
        }
    }
    let norm = vec_norm(&psi_lifted);
    if (norm - 1.0).abs() > LIFT_IDENTITY {
        return Err(Error::Consistency {
            what: "‖Ψ‖ = 1".into(),
            lhs: norm,
            rhs: 1.0,
        });
    }
    for (what, r) in [
        ("hat operators commute", hat_commutation_residual),
        ("Û_j Ψ = U^T_j″ Ψ", switch_residual),
    ] {
        if r > LIFT_IDENTITY {
            return Err(Error::Consistency {
                what: what.into(),
                lhs: r,
                rhs: 0.0,
            });
        }
    }
    Ok(LiftedSystem {
        base: system.clone(),
        psi: psi.clone(),
        psi0,
        psi_lifted,
        protocol,
        hat_commutation_residual,
        switch_residual,
        engine,
    })
}

/// `‖U_{j₁} ⋯ U_{j_k} Ψ − Û_{j₁} ⋯ Û_{j_k} Ψ‖`, operators applied right to left.
pub fn simulation_error(lifted: &LiftedSystem, sequence: &[(usize, SingleQubitOp)]) -> Result<f64> {
    let n = lifted.n();
    for (t, (j, u)) in sequence.iter().enumerate() {
        if *j >= n {
            return Err(Error::OutOfRange {
                name: "qubit index",
                value: *j as f64,
                range: format!("[0, {n})"),
            });
        }
        let norm = u.norm();
        if norm > 1.0 + 1e-12 {
            return Err(Error::InvalidInput(format!(
                "operator {t} has norm {norm} > 1"
            )));
        }
    }
    let e = &lifted.engine;
    let direct = sequence
        .iter()
        .rev()
        .fold(lifted.psi_lifted.clone(), |v, (j, u)| e.on_system(u, *j, &v));
    // The swaps are involutions, so the chain of hats telescopes.
    let inner_part = sequence
        .iter()
        .rev()
        .fold(lifted.psi0.clone(), |v, (j, u)| e.apply_anc(u.matrix(), 2 * j, &v));
    let hatted = e.swap_up(&inner_part);
    Ok(diff_norm(&direct, &hatted))
}

/// Singular values of `B = Σ_{a,b} |Ψ_{a,b}⟩⟨a,b|` and the checks built on them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionCertificate {
    pub n: usize,
    pub dim_h: usize,
    /// `ε` used in the bounds: the mean of the per-qubit `ε_j`.
    pub epsilon: f64,
    /// Descending.
    pub singular_values: Vec<f64>,
    /// `Σ_i (λ_i − 1)²`.
    pub sum_sq_dev: f64,
    pub sum_sq_bound: f64,
    /// `#{λ_i ≥ 1/2}`.
    pub rank_lower_bound: usize,
    /// `max |⟨Ψ̂_{a,b}|Ψ̂_{c,d}⟩ − δ|`.
    pub hat_orthonormality_defect: f64,
    /// `max_{a,b} ‖Ψ̂_{a,b} − Ψ_{a,b}‖`.
    pub max_hat_distance: f64,
    /// `Σ_k 8√(2ε_k)`.
    pub hat_distance_bound: f64,
    pub checks: Vec<BoundCheck>,
}

/// Calls `f` in application order for `(X_n^{a_n} Z_n^{b_n}) ⋯ (X_1^{a_1} Z_1^{b_1})`;
/// `a`, `b` are bitmasks over qubits.
fn shift(n: usize, a: usize, b: usize, mut f: impl FnMut(usize, Label)) {
    for j in 0..n {
        if b >> j & 1 == 1 {
            f(j, Label::Z);
        }
        if a >> j & 1 == 1 {
            f(j, Label::X);
        }
    }
}

pub fn rank_certificate(lifted: &LiftedSystem) -> Result<DimensionCertificate> {
    let (n, d) = (lifted.n(), lifted.dim_h());
    let cols = 1usize << (2 * n);
    let required = cols.saturating_mul(lifted.lifted_dim());
    if required > RANK_BUDGET {
        return Err(Error::MemoryBudget {
            required,
            limit: RANK_BUDGET,
        });
    }
    let e = &lifted.engine;
    let anc = e.anc;
    let psi = &lifted.psi_lifted;

    // Ψ_{a,b} = (W_{a,b} ⊗ I)Ψ, so B†B only needs the reduced state on H.
    let sigma = ComplexMatrix::from_fn(d, |h, h2| {
        inner(&psi[h2 * anc..(h2 + 1) * anc], &psi[h * anc..(h + 1) * anc])
    });
    let labels: Vec<(usize, usize)> = (0..cols).map(|c| (c >> n, c & ((1 << n) - 1))).collect();
    let words: Vec<ComplexMatrix> = labels
        .iter()
        .map(|&(a, b)| {
            let mut w = ComplexMatrix::identity(d);
            shift(
                n,
                a,
                b,
                |j, l| {
                    let m = if l == Label::X { &e.x[j] } else { &e.z[j] };
                    w = m * &w;
                },
            );
            w
        })
        .collect();
    let weighted: Vec<ComplexMatrix> = words.iter().map(|w| w * &sigma).collect();
    let gram = ComplexMatrix::from_fn(cols, |r, c| {
        let (wr, yc) = (&words[r], &weighted[c]);
        let mut acc = ZERO;
        for i in 0..d {
            for k in 0..d {
                acc += wr.get(i, k).conj() * yc.get(i, k);
            }
        }
        acc
    });
    let mut singular_values: Vec<f64> = eigenvalues(&HermitianOperator::from_parts_unchecked(gram))?
        .into_iter()
        .map(|mu| mu.max(0.0).sqrt())
        .collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let sum_sq_dev: f64 = singular_values.iter().map(|l| (l - 1.0).powi(2)).sum();
    let rank_lower_bound = singular_values.iter().filter(|&&l| l >= 0.5).count();

    let hats: Vec<Vec<C64>> = labels
        .par_iter()
        .map(|&(a, b)| {
            let mut v = lifted.psi0.clone();
            shift(
                n,
                a,
                b,
                |j, l| {
                    v = e.apply_anc(SingleQubitOp::pauli(l).matrix(), 2 * j, &v);
                },
            );
            e.swap_up(&v)
        })
        .collect();
    let mut hat_orthonormality_defect = 0.0f64;
    for r in 0..cols {
        for c in r..cols {
            let g = inner(&hats[r], &hats[c]);
            let target = if r == c { ONE } else { ZERO };
            hat_orthonormality_defect = hat_orthonormality_defect.max((g - target).norm());
        }
    }
    let max_hat_distance = labels
        .par_iter()
        .zip(&hats)
        .map(|(&(a, b), hat)| {
            let mut v = psi.clone();
            shift(
                n,
                a,
                b,
                |j, l| {
                    let m = if l == Label::X { &e.x[j] } else { &e.z[j] };
                    v = e.apply_h(m, &v);
                },
            );
            diff_norm(&v, hat)
        })
        .reduce(|| 0.0, f64::max);

    let report = &lifted.protocol;
    let epsilon = report.epsilon_mean;
    let hat_distance_bound: f64 = report
        .epsilon_per_qubit
        .iter()
        .map(|ek| 8.0 * (2.0 * ek).sqrt())
        .sum();
    let scale = 128.0 * cols as f64 * (n * n) as f64;
    let sum_sq_bound = scale * epsilon;
    let checks = vec![
        BoundCheck::new("Σ(λ_i − 1)² ≤ 128·4^n·n²·ε", sum_sq_dev, sum_sq_bound + 1e-12),
        BoundCheck::logged(
            "Σ(λ_i − 1)² ≤ 128·4^n·n²·(1 − acceptance)",
            sum_sq_dev,
            scale * report.epsilon + 1e-12,
        ),
        BoundCheck::new(
            "rank lower bound ≤ (dim H)²",
            rank_lower_bound as f64,
            (d * d) as f64,
        ),
        BoundCheck::new("Ψ̂_{a,b} orthonormal", hat_orthonormality_defect, LIFT_IDENTITY),
        BoundCheck::new(
            "max ‖Ψ̂_{a,b} − Ψ_{a,b}‖ ≤ Σ_k 8√(2ε_k)",
            max_hat_distance,
            hat_distance_bound + 1e-12,
        ),
    ];
    Ok(DimensionCertificate {
        n,
        dim_h: d,
        epsilon,
        singular_values,
        sum_sq_dev,
        sum_sq_bound,
        rank_lower_bound,
        hat_orthonormality_defect,
        max_hat_distance,
        hat_distance_bound,
        checks,
    })
}
