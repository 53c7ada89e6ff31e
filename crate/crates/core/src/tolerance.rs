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

//! Default numerical tolerances.
//!
//! Constructors that certify an operator property take these values unless a
//! [`Tolerances`] override is passed explicitly.

use serde::{Deserialize, Serialize};

/// Max-entry Hermiticity defect `|A − A†|`.
pub const HERMITIAN: f64 = 1e-12;
/// `‖A² − I‖` for reflections.
pub const REFLECTION: f64 = 1e-10;
/// `‖A² − A‖` for projections.
pub const PROJECTION: f64 = 1e-10;
/// `‖{X, Z}‖` for exact qubit pairs.
pub const PAIR: f64 = 1e-10;
/// `|‖ψ‖ − 1|` for state vectors.
pub const STATE_NORM: f64 = 1e-12;
/// Density operators: eigenvalue floor and trace error.
pub const DENSITY: f64 = 1e-10;
/// Residual allowed when extracting `X'` from `σ ⊗ X'`.
pub const FACTOR_EXTRACTION: f64 = 1e-8;

/// Largest ambient dimension a dense matrix may have (2¹³).
pub const MAX_DIM: usize = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub reflection: f64,
    pub projection: f64,
    pub pair: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: HERMITIAN,
            reflection: REFLECTION,
            projection: PROJECTION,
            pair: PAIR,
        }
    }
}
