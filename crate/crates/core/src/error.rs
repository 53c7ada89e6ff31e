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

use thiserror::Error;

/// Errors produced by the operator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("operator is not Hermitian (defect {defect:.3e} > {tol:.1e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("operator is not a reflection (‖A² − I‖ = {defect:.3e} > {tol:.1e})")]
    NotReflection { defect: f64, tol: f64 },

    #[error("operator is not a projection (‖A² − A‖ = {defect:.3e} > {tol:.1e})")]
    NotProjection { defect: f64, tol: f64 },

    #[error("reflections do not anticommute (‖{{X, Z}}‖ = {defect:.3e} > {tol:.1e})")]
    NotAnticommuting { defect: f64, tol: f64 },

    #[error("state is not normalised (‖ψ‖ = {norm})")]
    NotNormalized { norm: f64 },

    #[error("structural error: {0}")]
    Structural(String),

    #[error("eigensolver failed to converge (residual {residual:.3e})")]
    Convergence { residual: f64 },

    #[error("separation diverged at step {step}: rounding distance {distance:.4} ≥ 1/2")]
    Divergence { step: usize, distance: f64 },

    #[error("operator is not of the form σ ⊗ A (residual {residual:.3e})")]
    FormViolation { residual: f64 },

    #[error("internal consistency check failed: {what} ({lhs} vs {rhs})")]
    Consistency { what: String, lhs: f64, rhs: f64 },

    #[error("parameter `{name}` = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: String,
    },

    #[error("memory budget exceeded: {required} > {limit}")]
    MemoryBudget { required: usize, limit: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
