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


//! Fixture setup shared by the benchmarks.

use overlap_core::fixtures::projections_with_overlap;
use overlap_core::packing::{pack_clifford, PackingOptions};
use overlap_core::random::random_state;
use overlap_core::{Projection, QubitSystem, Result, StateVector};

/// Projections on `n` qubits with pairwise commutators at most `1/(40n)`.
pub fn separable_projections(n: usize, seed: u64) -> Result<Vec<Projection>> {
    projections_with_overlap(n, 1.0 / (40.0 * n as f64), seed)
}

/// `m` Clifford-packed qubits in `2^n` dimensions with a random state.
pub fn packed_with_state(n: usize, m: usize, seed: u64) -> Result<(QubitSystem, StateVector)> {
    let p = pack_clifford(n, m, seed, PackingOptions::default())?;
    let psi = random_state(p.system.dim(), seed);
    Ok((p.system, psi))
}
