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

//! Moving nearly commuting operators into exactly commuting position.

mod movement;
mod projections;
mod qubits;
mod swap;

pub use movement::{
    build_movement_example, movement_closed_forms, movement_lower_bound, MovementChecks,
    MovementExample, MovementLowerBound,
};
pub use projections::{
    block_diagonalize, separate_generic, separate_projections, ProcessingOrder, SeparableOp,
    SeparationOptions,
};
pub use qubits::{
    extract_factor, separate_qubits, LiftStrategy, QubitSeparation, QubitSeparationOptions,
    TaggedOperator,
};
pub use swap::{swap_bound_checks, swap_separate, SwapSeparation, SWAP_MAX_DIM};

use serde::{Deserialize, Serialize};

use crate::report::BoundCheck;

/// Which algorithm produced a [`SeparationReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Projections,
    Qubits,
    Swap,
}

/// State after step `k` of the projection separation: `delta` bounds how far
/// the remaining operators have moved, `epsilon` their pairwise commutators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepTrace {
    pub k: usize,
    pub delta: f64,
    pub epsilon: f64,
    /// `‖Q_k − P_k^{(k−1)}‖`; absent for `k = 0`.
    pub rounding_distance: Option<f64>,
    /// `max_j ‖[Q_k, P_j^{(k−1)}]‖` over the operators still to process.
    pub max_q_commutator: Option<f64>,
    /// `‖Q_k − P_k‖` against the original operator.
    pub q_movement: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankChange {
    pub index: usize,
    pub before: usize,
    pub after: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub method: Method,
    pub n: usize,
    /// The overlap parameter the bounds are stated in.
    pub epsilon: f64,
    /// Largest overlap measured on the input.
    pub measured_epsilon: f64,
    pub order: Vec<usize>,
    pub trace: Vec<StepTrace>,
    /// Per original index, the distance each operator moved.
    pub movement: Vec<f64>,
    pub max_movement: f64,
    pub max_residual_commutator: f64,
    pub bound: f64,
    /// `bound − movement_i`.
    pub slack: Vec<f64>,
    pub precondition_ok: bool,
    pub warnings: Vec<String>,
    pub rank_changes: Vec<RankChange>,
    pub checks: Vec<BoundCheck>,
}

impl SeparationReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| c.violated())
    }

    pub fn all_pass(&self) -> bool {
        self.violations().next().is_none()
    }
}
