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

//! Separation of nearly commuting projections by alternating rounding and
//! block-diagonalization.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Method, RankChange, SeparationReport, StepTrace};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::operator::{HermitianOperator, Projection};
use crate::random::substream;
use crate::report::BoundCheck;
use crate::spectral::{norm_of, round_with_distance, SpectrumTarget};

/// Slack for comparing recursively accumulated floating-point quantities.
const RECURSION_SLACK: f64 = 1e-12;
const RESIDUAL_TOL: f64 = 1e-9;

/// Operations the separation needs from an operator `0 ⪯ P ⪯ I`.
pub trait SeparableOp: Clone + Send + Sync {
    /// Nearest projection in the eigenbasis, with `‖round(P) − P‖`.
    fn round(&self) -> Result<(Self, f64)>;
    fn distance(&self, other: &Self) -> Result<f64>;
    fn commutator_norm(&self, other: &Self) -> Result<f64>;
    /// `QPQ + (I − Q)P(I − Q)` for a projection `q`.
    fn block_diagonalize(&self, q: &Self) -> Result<Self>;
    fn trace(&self) -> f64;
}

/// `½(A + RAR)` with `R = 2Q − I`, which equals `QAQ + (I − Q)A(I − Q)`.
fn block_diag_matrix(a: &ComplexMatrix, q: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(a.dim());
    let r = &q.scale_real(2.0) - &id;
    let rar = &(&r * a) * &r;
    (a + &rar).scale_real(0.5).hermitian_part()
}

impl SeparableOp for HermitianOperator {
    fn round(&self) -> Result<(Self, f64)> {
        round_with_distance(self, SpectrumTarget::Binary)
    }

    fn distance(&self, other: &Self) -> Result<f64> {
        norm_of(&(self.matrix() - other.matrix()))
    }

    fn commutator_norm(&self, other: &Self) -> Result<f64> {
        norm_of(&ComplexMatrix::commutator(self.matrix(), other.matrix()))
    }

    fn block_diagonalize(&self, q: &Self) -> Result<Self> {
        Ok(HermitianOperator::from_parts_unchecked(block_diag_matrix(
            self.matrix(),
            q.matrix(),
        )))
    }

    fn trace(&self) -> f64 {
        self.matrix().trace().re
    }
}

/// `QAQ + (I − Q)A(I − Q)`.
pub fn block_diagonalize(a: &HermitianOperator, q: &Projection) -> Result<HermitianOperator> {
    if a.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: q.dim(),
        });
    }
    Ok(HermitianOperator::from_parts_unchecked(block_diag_matrix(
        a.matrix(),
        q.matrix(),
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ProcessingOrder {
    /// Index order `1, …, n`.
    #[default]
    Given,
    /// A seeded random permutation.
    Shuffled(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SeparationOptions {
    pub order: ProcessingOrder,
}

fn max_pairwise<T: SeparableOp>(ops: &[T]) -> Result<f64> {
    let pairs: Vec<(usize, usize)> = (0..ops.len())
        .flat_map(|i| (i + 1..ops.len()).map(move |j| (i, j)))
        .collect();
    let norms = pairs
        .par_iter()
        .map(|&(i, j)| ops[i].commutator_norm(&ops[j]))
        .collect::<Result<Vec<_>>>()?;
    Ok(norms.into_iter().fold(0.0, f64::max))
}

fn rank_of(t: f64) -> usize {
    t.round().max(0.0) as usize
}

/// The separation loop over any [`SeparableOp`]. Outputs are in input order.
///
/// At step `k` the next operator in processing order is rounded to a
/// projection `Q_k`, and every operator not yet processed is
/// block-diagonalized against it. The report records `δ_k` and `ε_k`
/// measured on the operators still pending.
pub fn separate_generic<T: SeparableOp>(
    ops: &[T],
    eps: f64,
    opts: &SeparationOptions,
) -> Result<(Vec<T>, SeparationReport)> {
    let n = ops.len();
    if n == 0 {
        return Err(Error::InvalidInput("no operators to separate".into()));
    }
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            range: "[0, ∞)".into(),
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    if let ProcessingOrder::Shuffled(seed) = opts.order {
        order.shuffle(&mut substream(seed, "separation_order"));
    }
    let original: Vec<T> = order.iter().map(|&i| ops[i].clone()).collect();
    let mut current = original.clone();
    let mut warnings = Vec::new();

    let measured_epsilon = max_pairwise(&original)?;
    let mut precondition_ok = eps <= 1.0 / (32.0 * n as f64);
    if !precondition_ok {
        warnings.push(format!(
            "ε = {eps:.3e} exceeds 1/(32n) = {:.3e}; bounds are reported but not asserted",
            1.0 / (32.0 * n as f64)
        ));
    }
    if measured_epsilon > eps * (1.0 + 1e-9) + RECURSION_SLACK {
        precondition_ok = false;
        warnings.push(format!(
            "measured pairwise commutator {measured_epsilon:.3e} exceeds ε = {eps:.3e}"
        ));
    }

    let mut trace = vec![StepTrace {
        k: 0,
        delta: 0.0,
        epsilon: measured_epsilon,
        rounding_distance: None,
        max_q_commutator: None,
        q_movement: None,
    }];
    let mut outputs: Vec<T> = Vec::with_capacity(n);
    for k in 0..n {
        let (q, distance) = current[k].round()?;
        if distance >= 0.5 {
            return Err(Error::Divergence {
                step: k + 1,
                distance,
            });
        }
        let rest = &current[k + 1..];
        let updated: Vec<(T, f64)> = rest
            .par_iter()
            .map(|p| Ok((p.block_diagonalize(&q)?, q.commutator_norm(p)?)))
            .collect::<Result<_>>()?;
        let max_q_commutator = updated.iter().map(|u| u.1).fold(0.0, f64::max);
        for (slot, (p, _)) in current[k + 1..].iter_mut().zip(updated) {
            *slot = p;
        }
        let q_movement = q.distance(&original[k])?;
        let delta = current[k + 1..]
            .par_iter()
            .zip(&original[k + 1..])
            .map(|(c, o)| c.distance(o))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        let epsilon = max_pairwise(&current[k + 1..])?;
        trace.push(StepTrace {
            k: k + 1,
            delta,
            epsilon,
            rounding_distance: Some(distance),
            max_q_commutator: Some(max_q_commutator),
            q_movement: Some(q_movement),
        });
        outputs.push(q);
    }

    let mut movement = vec![0.0; n];
    let mut rank_changes = Vec::new();
    let mut result: Vec<Option<T>> = vec![None; n];
    for (pos, &idx) in order.iter().enumerate() {
        movement[idx] = trace[pos + 1].q_movement.unwrap_or(0.0);
        let (before, after) = (rank_of(original[pos].trace()), rank_of(outputs[pos].trace()));
        if before != after {
            rank_changes.push(RankChange {
                index: idx,
                before,
                after,
            });
        }
        result[idx] = Some(outputs[pos].clone());
    }
    let result: Vec<T> = result.into_iter().map(|o| o.expect("every index filled")).collect();
    let max_residual_commutator = max_pairwise(&result)?;
    let bound = 8.0 * n as f64 * eps;
    let max_movement = movement.iter().copied().fold(0.0, f64::max);

    let mut checks = vec![
        BoundCheck::new("max ‖P_i − Q_i‖ ≤ 8nε", max_movement, bound + RECURSION_SLACK).with_asserted(precondition_ok),
        BoundCheck::new("max ‖[Q_i, Q_j]‖", max_residual_commutator, RESIDUAL_TOL),
    ];
    let mut worst = [f64::NEG_INFINITY; 5];
    for w in trace.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let k = a.k as f64;
        worst[0] = worst[0].max(b.delta - (a.delta + 2.0 * a.epsilon));
        worst[1] = worst[1].max(b.epsilon - (a.epsilon + 8.0 * a.epsilon * a.epsilon));
        worst[2] = worst[2].max(b.delta - 4.0 * (k + 1.0) * eps);
        worst[3] = worst[3].max(b.epsilon - (eps + 32.0 * k * eps * eps));
        worst[4] = worst[4].max(b.q_movement.unwrap_or(0.0) - 2.0 * a.delta);
    }
    let regime = precondition_ok;
    checks.push(
        BoundCheck::new("δ_{k+1} − (δ_k + 2ε_k)", worst[0], RECURSION_SLACK).with_asserted(regime),
    );
    checks.push(
        BoundCheck::new("ε_{k+1} − (ε_k + 8ε_k²)", worst[1], RECURSION_SLACK).with_asserted(regime),
    );
    checks.push(BoundCheck::new("δ_k − 4kε", worst[2], RECURSION_SLACK).with_asserted(regime));
    checks.push(
        BoundCheck::new("ε_k − (ε + 32(k−1)ε²)", worst[3], RECURSION_SLACK).with_asserted(regime),
    );
    checks.push(BoundCheck::new("‖Q_k − P_k‖ − 2δ_{k−1}", worst[4], RECURSION_SLACK));

    let slack = movement.iter().map(|m| bound - m).collect();
    let report = SeparationReport {
        method: Method::Projections,
        n,
        epsilon: eps,
        measured_epsilon,
        order,
        trace,
        movement,
        max_movement,
        max_residual_commutator,
        bound,
        slack,
        precondition_ok,
        warnings,
        rank_changes,
        checks,
    };
    Ok((result, report))
}

/// Commuting projections `Q_i` with `‖P_i − Q_i‖ ≤ 8nε` whenever every
/// `‖[P_i, P_j]‖ ≤ ε ≤ 1/(32n)`.
pub fn separate_projections(
    ps: &[Projection],
    eps: f64,
    opts: &SeparationOptions,
) -> Result<(Vec<Projection>, SeparationReport)> {
    if let Some(p) = ps.iter().find(|p| p.dim() != ps[0].dim()) {
        return Err(Error::DimensionMismatch {
            left: ps[0].dim(),
            right: p.dim(),
        });
    }
    let ops: Vec<HermitianOperator> = ps.iter().map(|p| p.op().clone()).collect();
    let (qs, report) = separate_generic(&ops, eps, opts)?;
    let qs = qs
        .into_iter()
        .map(Projection::new)
        .collect::<Result<Vec<_>>>()?;
    Ok((qs, report))
}
