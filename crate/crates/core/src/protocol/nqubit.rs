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

//! The n-qubit protocol: measure every reflection in order, then repeat one.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pairwise::{compress, dephase_matrix};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::qubit::{Label, QubitSystem};
use crate::random::substream;
use crate::state::{vec_norm, StateVector};

/// Two-sided 95% normal quantile.
pub const WILSON_Z: f64 = 1.959964;

/// Anticommutation defect above which a pair is not treated as exact.
const EXACT_PAIR: f64 = 1e-9;

/// Order of the first sweep: `X_1, Z_1, X_2, …` or `Z_1, X_1, Z_2, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    XFirst,
    ZFirst,
}

impl Ordering {
    pub const BOTH: [Ordering; 2] = [Ordering::XFirst, Ordering::ZFirst];

    fn labels(self) -> [Label; 2] {
        match self {
            Ordering::XFirst => [Label::X, Label::Z],
            Ordering::ZFirst => [Label::Z, Label::X],
        }
    }

    /// The label measured second within each qubit, which is the one repeated.
    pub fn repeated(self) -> Label {
        self.labels()[1]
    }
}

/// One branch of the protocol: the sweep followed by a repeat of qubit `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub ordering: Ordering,
    pub repeat_index: usize,
    /// `(qubit, label)` in measurement order, ending with the repeat.
    pub sequence: Vec<(usize, Label)>,
    /// Position in `sequence` of the repeated reflection's first measurement.
    pub first_occurrence: usize,
}

impl MeasurementPlan {
    pub fn new(n: usize, ordering: Ordering, repeat_index: usize) -> Result<Self> {
        if repeat_index >= n {
            return Err(Error::OutOfRange {
                name: "repeat_index",
                value: repeat_index as f64,
                range: format!("[0, {n})"),
            });
        }
        let mut sequence: Vec<(usize, Label)> = (0..n)
            .flat_map(|q| ordering.labels().map(|l| (q, l)))
            .collect();
        let repeated = (repeat_index, ordering.repeated());
        sequence.push(repeated);
        Ok(Self {
            ordering,
            repeat_index,
            sequence,
            first_occurrence: 2 * repeat_index + 1,
        })
    }

    pub fn repeated(&self) -> (usize, Label) {
        (self.repeat_index, self.ordering.repeated())
    }

    /// Measurements strictly between the two occurrences of the repeat.
    pub fn middle(&self) -> &[(usize, Label)] {
        &self.sequence[self.first_occurrence + 1..self.sequence.len() - 1]
    }

    pub fn prefix(&self) -> &[(usize, Label)] {
        &self.sequence[..self.first_occurrence]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchAcceptance {
    pub ordering: Ordering,
    pub j: usize,
    pub acceptance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarlo {
    pub shots: u64,
    pub seed: u64,
    pub accepts: u64,
    pub estimate: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    /// `√(p(1−p)/shots)` at the exact acceptance `p`.
    pub sigma: f64,
    /// `|estimate − exact| > 4σ`.
    pub flagged: bool,
    /// Whether the exact acceptance lies in `[wilson_low, wilson_high]`.
    pub exact_in_interval: bool,
}

/// Exact acceptance probabilities, with an optional sampled estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub n: usize,
    pub dim: usize,
    pub acceptance_exact: f64,
    pub per_branch: Vec<BranchAcceptance>,
    /// `1 − acceptance_exact`.
    pub epsilon: f64,
    /// `ε_j = 1 − min(acc_X-first(j), acc_Z-first(j))`.
    pub epsilon_per_qubit: Vec<f64>,
    /// `mean_j ε_j`, so that `Σ_j ε_j = n · epsilon_mean`. Never below `epsilon`.
    pub epsilon_mean: f64,
    pub monte_carlo: Option<MonteCarlo>,
}

impl ProtocolReport {
    pub fn branch(&self, ordering: Ordering, j: usize) -> Option<f64> {
        self.per_branch
            .iter()
            .find(|b| b.ordering == ordering && b.j == j)
            .map(|b| b.acceptance)
    }

    /// Rejection of qubit `j` averaged over the two orderings; these sum to `nε`.
    pub fn average_rejection(&self, j: usize) -> f64 {
        let acc: f64 = Ordering::BOTH
            .iter()
            .filter_map(|&o| self.branch(o, j))
            .sum();
        1.0 - acc / 2.0
    }
}

fn check_exact(system: &QubitSystem, psi: &StateVector) -> Result<()> {
    if psi.dim() != system.dim() {
        return Err(Error::DimensionMismatch {
            left: psi.dim(),
            right: system.dim(),
        });
    }
    for (j, pair) in system.pairs().iter().enumerate() {
        if pair.anticomm_defect() > EXACT_PAIR {
            return Err(Error::Precondition(format!(
                "qubit {j} is not an exact pair (‖{{X, Z}}‖ = {:.3e})",
                pair.anticomm_defect()
            )));
        }
    }
    Ok(())
}

fn reflection<'a>(system: &'a QubitSystem, (q, l): (usize, Label)) -> &'a ComplexMatrix {
    system.pair(q).get(l).matrix()
}

fn branch_acceptance(system: &QubitSystem, rho: &ComplexMatrix, plan: &MeasurementPlan) -> f64 {
    let rho0 = plan
        .prefix()
        .iter()
        .fold(rho.clone(), |r, &m| dephase_matrix(&r, reflection(system, m)));
    let r = reflection(system, plan.repeated());
    [1.0, -1.0]
        .into_iter()
        .map(|a| {
            let mid = plan
                .middle()
                .iter()
                .fold(compress(&rho0, r, a), |s, &m| {
                    dephase_matrix(&s, reflection(system, m))
                });
            compress(&mid, r, a).trace().re
        })
        .sum()
}

/// Acceptance of every `(ordering, j)` branch via composed dephasing channels.
pub fn nqubit_test_exact(system: &QubitSystem, psi: &StateVector) -> Result<ProtocolReport> {
    check_exact(system, psi)?;
    let n = system.n();
    let rho = psi.density().matrix().clone();
    let plans = Ordering::BOTH
        .into_iter()
        .flat_map(|o| (0..n).map(move |j| (o, j)))
        .map(|(o, j)| MeasurementPlan::new(n, o, j))
        .collect::<Result<Vec<_>>>()?;
    let per_branch: Vec<BranchAcceptance> = plans
        .par_iter()
        .map(|plan| BranchAcceptance {
            ordering: plan.ordering,
            j: plan.repeat_index,
            acceptance: branch_acceptance(system, &rho, plan).clamp(0.0, 1.0),
        })
        .collect();
    let acceptance_exact =
        per_branch.iter().map(|b| b.acceptance).sum::<f64>() / per_branch.len() as f64;
    let epsilon_per_qubit: Vec<f64> = (0..n)
        .map(|j| {
            let worst = per_branch
                .iter()
                .filter(|b| b.j == j)
                .map(|b| b.acceptance)
                .fold(1.0, f64::min);
            1.0 - worst
        })
        .collect();
    let epsilon_mean = epsilon_per_qubit.iter().sum::<f64>() / n as f64;
    Ok(ProtocolReport {
        n,
        dim: system.dim(),
        acceptance_exact,
        per_branch,
        epsilon: 1.0 - acceptance_exact,
        epsilon_per_qubit,
        epsilon_mean,
        monte_carlo: None,
    })
}

/// Wilson score interval for `accepts` successes in `shots` trials.
pub fn wilson_interval(accepts: u64, shots: u64, z: f64) -> (f64, f64) {
    let n = shots as f64;
    let p = accepts as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn measure<R: Rng>(rng: &mut R, r: &ComplexMatrix, psi: &mut Vec<C64>) -> f64 {
    let rpsi = r.apply(psi);
    let plus: Vec<C64> = psi.iter().zip(&rpsi).map(|(a, b)| (a + b) * 0.5).collect();
    let p_plus = vec_norm(&plus).powi(2);
    let u: f64 = rng.gen();
    let (sign, mut post, p) = if u < p_plus {
        (1.0, plus, p_plus)
    } else {
        let minus = psi.iter().zip(&rpsi).map(|(a, b)| (a - b) * 0.5).collect();
        (-1.0, minus, 1.0 - p_plus)
    };
    let norm = p.max(f64::MIN_POSITIVE).sqrt();
    post.iter_mut().for_each(|a| *a /= norm);
    *psi = post;
    sign
}

fn shot(system: &QubitSystem, plans: &[MeasurementPlan], psi: &StateVector, seed: u64, i: u64) -> bool {
    let mut rng = substream(seed, &format!("shot/{i}"));
    let plan = &plans[rng.gen_range(0..plans.len())];
    let mut state = psi.amplitudes().to_vec();
    let mut first = 0.0;
    let last = plan.sequence.len() - 1;
    for (pos, &m) in plan.sequence.iter().enumerate() {
        let outcome = measure(&mut rng, reflection(system, m), &mut state);
        if pos == plan.first_occurrence {
            first = outcome;
        }
        if pos == last {
            return outcome == first;
        }
    }
    unreachable!("sequence is nonempty")
}

/// Simulates `shots` runs of the protocol by state-vector collapse, each with
/// its own RNG substream, and attaches the tally to the exact report.
pub fn nqubit_test_sample(
    system: &QubitSystem,
    psi: &StateVector,
    shots: u64,
    seed: u64,
) -> Result<ProtocolReport> {
    if shots == 0 {
        return Err(Error::InvalidInput("shots must be ≥ 1".into()));
    }
    let mut report = nqubit_test_exact(system, psi)?;
    let n = system.n();
    let plans = Ordering::BOTH
        .into_iter()
        .flat_map(|o| (0..n).map(move |j| MeasurementPlan::new(n, o, j)))
        .collect::<Result<Vec<_>>>()?;
    let accepts = (0..shots)
        .into_par_iter()
        .filter(|&i| shot(system, &plans, psi, seed, i))
        .count() as u64;
    let estimate = accepts as f64 / shots as f64;
    let (wilson_low, wilson_high) = wilson_interval(accepts, shots, WILSON_Z);
    let p = report.acceptance_exact;
    let sigma = (p * (1.0 - p) / shots as f64).sqrt();
    let dev = (estimate - p).abs();
    report.monte_carlo = Some(MonteCarlo {
        shots,
        seed,
        accepts,
        estimate,
        wilson_low,
        wilson_high,
        sigma,
        flagged: dev > 4.0 * sigma && dev > 1e-12,
        exact_in_interval: (wilson_low..=wilson_high).contains(&p),
    });
    Ok(report)
}
