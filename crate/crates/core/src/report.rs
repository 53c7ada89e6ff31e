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

//! Bound verdicts shared by every report type.

use serde::{Deserialize, Serialize};

/// One inequality `measured ≤ bound`, with `margin = bound − measured`.
///
/// Checks that only hold inside a bound's parameter regime are recorded
/// with `asserted = false` when the regime is left, so they are reported but
/// do not count as violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
    pub asserted: bool,
}

impl BoundCheck {
    pub fn new(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            margin: bound - measured,
            pass: measured <= bound,
            asserted: true,
        }
    }

    /// A check reported for information only.
    pub fn logged(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            asserted: false,
            ..Self::new(name, measured, bound)
        }
    }

    /// `measured ≥ bound`, stored as `−measured ≤ −bound`'s verdict with the
    /// original numbers.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            bound,
            margin: measured - bound,
            pass: measured >= bound,
            asserted: true,
        }
    }

    pub fn with_asserted(mut self, asserted: bool) -> Self {
        self.asserted = asserted;
        self
    }

    /// Asserted and failing.
    pub fn violated(&self) -> bool {
        self.asserted && !self.pass
    }
}

/// First asserted check that fails.
pub fn first_violation(checks: &[BoundCheck]) -> Option<&BoundCheck> {
    checks.iter().find(|c| c.violated())
}
