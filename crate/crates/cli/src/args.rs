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


//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use overlap_core::separation::LiftStrategy;
use serde::Serialize;

#[derive(Debug, Clone, Parser)]
#[command(name = "overlap-lab", version = env!("OVERLAP_LAB_VERSION"))]
#[command(about = "Seeded experiments on overlapping qubits with JSON reports")]
pub struct Cli {
    /// Report path; stdout when absent. Timings go to `<out>.meta.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Pack m qubits into 2^n dimensions through a Clifford representation.
    PackClifford(PackArgs),
    /// Pack m qubits into 2^n dimensions through the exterior algebra.
    PackExterior(PackArgs),
    /// Round nearly commuting projections to commuting ones.
    SeparateProj(SeparateProjArgs),
    /// Move nearly independent qubits into exactly independent position.
    SeparateQubits(SeparateQubitsArgs),
    /// Separate qubits by swapping each into a fresh register.
    SwapSeparate(SystemArgs),
    /// The Hamiltonian example forcing separated qubits to move.
    MovementExample(MovementArgs),
    /// Closed form against channel evaluation of the pairwise test.
    PairwiseTest(PairwiseArgs),
    /// Exact and sampled acceptance of the n-qubit protocol.
    NqubitTest(NqubitArgs),
    /// Qubits whose k-wise products commute on a fixed state.
    Kcommute(KcommuteArgs),
    /// Three operators whose block-diagonalization breaks commutation on a state.
    Counterexample(CounterexampleArgs),
    /// Simulation error of the lifted system on random operator sequences.
    EprLift(EprLiftArgs),
    /// Singular-value dimension certificate of the lifted system.
    RankCert(SystemArgs),
    /// Run another subcommand over a grid of one parameter and emit CSV.
    Sweep(SweepArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::PackClifford(_) => "pack-clifford",
            Command::PackExterior(_) => "pack-exterior",
            Command::SeparateProj(_) => "separate-proj",
            Command::SeparateQubits(_) => "separate-qubits",
            Command::SwapSeparate(_) => "swap-separate",
            Command::MovementExample(_) => "movement-example",
            Command::PairwiseTest(_) => "pairwise-test",
            Command::NqubitTest(_) => "nqubit-test",
            Command::Kcommute(_) => "kcommute",
            Command::Counterexample(_) => "counterexample",
            Command::EprLift(_) => "epr-lift",
            Command::RankCert(_) => "rank-cert",
            Command::Sweep(_) => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fixture {
    /// Exact Pauli qubits on n sites.
    Paulis,
    /// Pauli qubits rotated by seeded unitaries.
    Perturbed,
    /// Clifford packing of m qubits into 2^n dimensions.
    Clifford,
    /// Exterior-algebra packing of m qubits into 2^n dimensions.
    Exterior,
    /// k-wise commuting construction.
    Kcommute,
    /// Pauli qubits restricted to strings other than all-zeros and all-ones.
    Remark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateChoice {
    /// The fixture's own state, `|0…0⟩` for paulis, random otherwise.
    Auto,
    /// The first basis vector.
    Zero,
    /// A seeded random state.
    Random,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SystemArgs {
    #[arg(long, value_enum, default_value_t = Fixture::Paulis)]
    pub fixture: Fixture,
    /// Qubit count; for clifford and exterior, log2 of the dimension.
    #[arg(long)]
    pub n: usize,
    /// Packed qubit count (clifford, exterior).
    #[arg(long)]
    pub m: Option<usize>,
    /// Commutation order (kcommute).
    #[arg(long)]
    pub k: Option<usize>,
    /// Rotation strength (perturbed).
    #[arg(long)]
    pub strength: Option<f64>,
    #[arg(long, value_enum, default_value_t = StateChoice::Auto)]
    pub state: StateChoice,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PackArgs {
    /// The ambient dimension is 2^n.
    #[arg(long)]
    pub n: usize,
    /// Number of qubits.
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub seed: u64,
    /// Orthonormalize the whole vector family.
    #[arg(long)]
    pub orthogonalize: bool,
    /// Constant `c` in the asserted bound `overlap ≤ c · epsilon_achieved`.
    #[arg(long, default_value_t = 8.0)]
    pub overlap_constant: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeparateProjArgs {
    #[arg(long)]
    pub n: usize,
    /// Target largest pairwise commutator of the input projections.
    #[arg(long)]
    pub eps: f64,
    #[arg(long)]
    pub seed: u64,
    /// Process the projections in a permutation drawn from this seed.
    #[arg(long)]
    pub shuffle: Option<u64>,
    /// Write the input and output projections as JSON to this path.
    #[arg(long)]
    #[serde(skip)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Dense,
    Factored,
    Auto,
}

impl From<Strategy> for LiftStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Dense => LiftStrategy::Dense,
            Strategy::Factored => LiftStrategy::Factored,
            Strategy::Auto => LiftStrategy::Auto,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SeparateQubitsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Overlap parameter of the bounds; the measured overlap when absent.
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = Strategy::Auto)]
    pub strategy: Strategy,
    #[arg(long)]
    pub shuffle: Option<u64>,
    /// Write the separated reflections as JSON to this path.
    #[arg(long)]
    #[serde(skip)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MovementArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub eps: f64,
    /// Check the closed forms only.
    #[arg(long)]
    pub skip_separation: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PairwiseArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NqubitArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Also sample the protocol this many times (needs `--seed`).
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KcommuteArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// Also evaluate the n-qubit protocol exactly.
    #[arg(long)]
    pub protocol: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CounterexampleArgs {
    /// Comma-separated values in (0, 1/4).
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.001,0.0001")]
    pub delta: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EprLiftArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    /// Random operator sequences to test (needs `--seed` when positive).
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Longest sequence drawn.
    #[arg(long, default_value_t = 4)]
    pub max_k: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Flag of the inner subcommand to vary, without the leading dashes.
    #[arg(long)]
    pub param: String,
    /// Comma-separated grid values.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub values: Vec<String>,
    /// Repeat every grid point with `--seed 0..seeds`.
    #[arg(long)]
    pub seeds: Option<u64>,
    /// The inner subcommand and its fixed arguments, after `--`.
    #[arg(last = true, required = true)]
    pub args: Vec<String>,
}
