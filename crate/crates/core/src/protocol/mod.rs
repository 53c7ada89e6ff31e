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

//! Tests of qubit independence relative to a state.

mod constructions;
mod lift;
mod nqubit;
mod pairwise;

pub use constructions::{
    blockdiag_counterexample, counterexample_scaling, kcommute_construct, remark_construct,
    Counterexample, CounterexampleScaling, KCommute, RemarkSystem,
};
pub use lift::{
    epr_lift, rank_certificate, simulation_error, DimensionCertificate, LiftSummary, LiftedSystem,
    SingleQubitOp, LIFT_BUDGET, RANK_BUDGET,
};
pub use nqubit::{
    nqubit_test_exact, nqubit_test_sample, wilson_interval, BranchAcceptance, MeasurementPlan,
    MonteCarlo, Ordering, ProtocolReport, WILSON_Z,
};
pub use pairwise::{dephase, pairwise_test, pairwise_test_detailed, PairwiseOutcome};
