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

//! Dense operator algebra for overlapping qubits.
//!
//! A qubit is a pair of anticommuting reflections `(X, Z)` on a complex
//! Hilbert space, and two qubits overlap by `max_{S,T} ‖[S_i, T_j]‖`. The
//! crate builds families of nearly independent qubits, moves them into
//! exactly independent position, and evaluates state-dependent tests of
//! independence both exactly and by sampling.

pub mod error;
pub mod fixtures;
pub mod matrix;
pub mod operator;
pub mod packing;
pub mod protocol;
pub mod pauli;
pub mod qubit;
pub mod random;
pub mod report;
pub mod separation;
pub mod serial;
pub mod spectral;
pub mod state;
pub mod tolerance;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
pub use operator::{commutator_norm, commutator_norms, HermitianOperator, Projection, Reflection};
pub use pauli::Pauli;
pub use report::BoundCheck;
pub use qubit::{overlap, tensor_normal_form, Label, OverlapMatrix, QubitPair, QubitSystem};
pub use spectral::{eigh, operator_norm, round_spectrum, Eigh, SpectrumTarget};
pub use state::{DensityOperator, StateVector};
pub use tolerance::Tolerances;
