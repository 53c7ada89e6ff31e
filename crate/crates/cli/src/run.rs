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


//! One function per subcommand, each returning the report body.

use std::path::Path;

use overlap_core::fixtures::{perturbed_paulis, projections_with_overlap, standard_paulis};
use overlap_core::packing::{pack_clifford, pack_exterior, PackingOptions, PackingResult};
use overlap_core::protocol::{
    blockdiag_counterexample, counterexample_scaling, epr_lift, kcommute_construct,
    nqubit_test_exact, nqubit_test_sample, pairwise_test_detailed, rank_certificate,
    remark_construct, simulation_error, SingleQubitOp,
};
use overlap_core::random::{random_reflection_matrix, random_state, random_state_with, substream};
use overlap_core::separation::{
    build_movement_example, movement_closed_forms, movement_lower_bound, separate_projections,
    separate_qubits, swap_separate, ProcessingOrder, QubitSeparationOptions, SeparationOptions,
};
use overlap_core::{serial, BoundCheck, ComplexMatrix, Label, QubitSystem, Reflection, StateVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::report::{usage, CliError, Phases, RunReport};

const EXACT: f64 = 1e-10;

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    Ok(serde_json::to_value(v)?)
}

fn config_of(cmd: &Command) -> Result<Value, CliError> {
    let mut v = to_value(cmd)?;
    if let Some(obj) = v.as_object_mut() {
        obj.remove("command");
    }
    Ok(v)
}

/// Runs any subcommand except `sweep`.
pub fn execute(cmd: &Command, phases: &mut Phases) -> Result<RunReport, CliError> {
    let (result, bounds) = match cmd {
        Command::PackClifford(a) => pack(a, false, phases)?,
        Command::PackExterior(a) => pack(a, true, phases)?,
        Command::SeparateProj(a) => separate_proj(a, phases)?,
        Command::SeparateQubits(a) => separate_qubits_cmd(a, phases)?,
        Command::SwapSeparate(a) => swap(a, phases)?,
        Command::MovementExample(a) => movement(a, phases)?,
        Command::PairwiseTest(a) => pairwise(a, phases)?,
        Command::NqubitTest(a) => nqubit(a, phases)?,
        Command::Kcommute(a) => kcommute(a, phases)?,
        Command::Counterexample(a) => counterexample(a, phases)?,
        Command::EprLift(a) => lift(a, phases)?,
        Command::RankCert(a) => rank(a, phases)?,
        Command::Sweep(_) => return usage("sweep cannot be executed as a single run"),
    };
    Ok(RunReport::new(cmd.name(), config_of(cmd)?, result, bounds))
}

type Outcome = (Value, Vec<BoundCheck>);

struct Built {
    system: QubitSystem,
    psi: StateVector,
    info: Value,
}

fn require_seed(seed: Option<u64>, why: &str) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Usage(format!("--seed is required for {why}")))
}

fn forbid<T>(v: &Option<T>, flag: &str, fixture: Fixture) -> Result<(), CliError> {
    if v.is_some() {
        return usage(format!("--{flag} does not apply to fixture {fixture:?}"));
    }
    Ok(())
}

fn validate_system(a: &SystemArgs) -> Result<(), CliError> {
    let f = a.fixture;
    match f {
        Fixture::Clifford | Fixture::Exterior => {
            if a.m.is_none() {
                return usage("--m is required for packed fixtures");
            }
            require_seed(a.seed, "packed fixtures")?;
            forbid(&a.k, "k", f)?;
            forbid(&a.strength, "strength", f)?;
        }
        Fixture::Kcommute => {
            if a.k.is_none() {
                return usage("--k is required for the kcommute fixture");
            }
            forbid(&a.m, "m", f)?;
            forbid(&a.strength, "strength", f)?;
        }
        Fixture::Perturbed => {
            match a.strength {
                Some(s) if s.is_finite() && s >= 0.0 => {}
                Some(s) => return usage(format!("--strength must be finite and ≥ 0, got {s}")),
                None => return usage("--strength is required for the perturbed fixture"),
            }
            require_seed(a.seed, "the perturbed fixture")?;
            forbid(&a.m, "m", f)?;
            forbid(&a.k, "k", f)?;
        }
        Fixture::Paulis | Fixture::Remark => {
            forbid(&a.m, "m", f)?;
            forbid(&a.k, "k", f)?;
            forbid(&a.strength, "strength", f)?;
        }
    }
    if a.state == StateChoice::Random {
        require_seed(a.seed, "--state random")?;
    }
    if a.n == 0 {
        return usage("--n must be positive");
    }
    Ok(())
}

fn build_system(a: &SystemArgs) -> Result<Built, CliError> {
    validate_system(a)?;
    let n = a.n;
    let (system, builtin, info) = match a.fixture {
        Fixture::Paulis => {
            if n > 13 {
                return usage("--n must be at most 13 for paulis");
            }
            let s = standard_paulis(n);
            let zero = StateVector::basis(s.dim(), 0);
            (s, Some(zero), Value::Null)
        }
        Fixture::Perturbed => {
            let s = perturbed_paulis(n, a.strength.unwrap_or(0.0), a.seed.unwrap_or(0))?;
            (s, None, Value::Null)
        }
        Fixture::Clifford | Fixture::Exterior => {
            let (m, seed) = (a.m.unwrap_or(0), a.seed.unwrap_or(0));
            let p = if a.fixture == Fixture::Clifford {
                pack_clifford(n, m, seed, PackingOptions::default())?
            } else {
                pack_exterior(n, m, seed, PackingOptions::default())?
            };
            let info = json!({ "epsilon_achieved": p.epsilon_achieved });
            (p.system, None, info)
        }
        Fixture::Kcommute => {
            let kc = kcommute_construct(n, a.k.unwrap_or(0))?;
            let info = json!({ "padded": kc.padded, "max_pairwise_residual": kc.max_pairwise_residual });
            (kc.system, Some(kc.psi), info)
        }
        Fixture::Remark => {
            let r = remark_construct(n)?;
            (r.system, Some(r.psi), Value::Null)
        }
    };
    let dim = system.dim();
    let psi = match (a.state, builtin) {
        (StateChoice::Auto, Some(b)) => b,
        (StateChoice::Zero, _) => StateVector::basis(dim, 0),
        (StateChoice::Auto, None) | (StateChoice::Random, _) => {
            random_state(dim, require_seed(a.seed, "a random state")?)
        }
    };
    let info = json!({
        "qubits": system.n(),
        "dim": dim,
        "max_overlap": system.overlap_matrix()?.max_off_diagonal(),
        "fixture": info,
    });
    Ok(Built { system, psi, info })
}

fn pack(a: &PackArgs, exterior: bool, phases: &mut Phases) -> Result<Outcome, CliError> {
    if !(a.overlap_constant.is_finite() && a.overlap_constant > 0.0) {
        return usage("--overlap-constant must be positive and finite");
    }
    let opts = PackingOptions {
        orthogonalize_all: a.orthogonalize,
    };
    let p: PackingResult = if exterior {
        pack_exterior(a.n, a.m, a.seed, opts)?
    } else {
        pack_clifford(a.n, a.m, a.seed, opts)?
    };
    phases.mark("pack");
    let report = p.report()?;
    phases.mark("overlap");
    let c = a.overlap_constant;
    let mut bounds = vec![BoundCheck::new(
        format!("max overlap ≤ {c}·epsilon_achieved"),
        report.max_overlap,
        c * report.epsilon_achieved,
    )];
    if a.orthogonalize {
        bounds.push(BoundCheck::new("orthogonal input: max overlap", report.max_overlap, EXACT));
    }
    Ok((to_value(&report)?, bounds))
}

fn dump_matrices(path: &Path, groups: &[(&str, Vec<&ComplexMatrix>)]) -> Result<(), CliError> {
    let mut obj = serde_json::Map::new();
    for (name, ms) in groups {
        let arr = ms
            .iter()
            .map(|m| serde_json::from_str::<Value>(&serial::to_json(m)))
            .collect::<Result<Vec<_>, _>>()?;
        obj.insert(name.to_string(), Value::Array(arr));
    }
    std::fs::write(path, serde_json::to_string(&Value::Object(obj))?)?;
    Ok(())
}

fn order(shuffle: Option<u64>) -> SeparationOptions {
    SeparationOptions {
        order: shuffle.map_or(ProcessingOrder::Given, ProcessingOrder::Shuffled),
    }
}

fn separate_proj(a: &SeparateProjArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    if a.n == 0 {
        return usage("--n must be positive");
    }
    let ps = projections_with_overlap(a.n, a.eps, a.seed)?;
    phases.mark("fixture");
    let (qs, report) = separate_projections(&ps, a.eps, &order(a.shuffle))?;
    phases.mark("separate");
    if let Some(path) = &a.dump {
        dump_matrices(
            path,
            &[
                ("inputs", ps.iter().map(|p| p.matrix()).collect()),
                ("outputs", qs.iter().map(|q| q.matrix()).collect()),
            ],
        )?;
    }
    let bounds = report.checks.clone();
    Ok((to_value(&report)?, bounds))
}

fn separate_qubits_cmd(a: &SeparateQubitsArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    let b = build_system(&a.system)?;
    phases.mark("fixture");
    let eps = match a.eps {
        Some(e) => e,
        None => b.system.overlap_matrix()?.max_off_diagonal(),
    };
    let opts = QubitSeparationOptions {
        strategy: a.strategy.into(),
        separation: order(a.shuffle),
    };
    let q = separate_qubits(&b.system, eps, &opts)?;
    phases.mark("separate");
    if let Some(path) = &a.dump {
        let pairs = q.system.pairs();
        dump_matrices(
            path,
            &[
                ("x", pairs.iter().map(|p| p.x().matrix()).collect()),
                ("z", pairs.iter().map(|p| p.z().matrix()).collect()),
            ],
        )?;
    }
    let mut bounds = q.report.checks.clone();
    bounds.extend(q.projection_report.checks.iter().cloned().map(|mut c| {
        c.name = format!("lifted projections: {}", c.name);
        c
    }));
    let result = json!({
        "system": b.info,
        "epsilon": eps,
        "route": q.route,
        "lifted_dim": q.lifted_dim,
        "report": q.report,
        "projection_report": q.projection_report,
    });
    Ok((result, bounds))
}

fn swap(a: &SystemArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    let b = build_system(a)?;
    phases.mark("fixture");
    let s = swap_separate(&b.system)?;
    phases.mark("separate");
    let bounds = s.report.checks.clone();
    let result = json!({
        "system": b.info,
        "movement_per_qubit": s.movement_per_qubit,
        "report": s.report,
    });
    Ok((result, bounds))
}

fn x_matrices(s: &QubitSystem) -> Vec<ComplexMatrix> {
    s.pairs().iter().map(|p| p.x().matrix().clone()).collect()
}

fn movement(a: &MovementArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    let ex = build_movement_example(a.n, a.eps)?;
    phases.mark("fixture");
    let closed = movement_closed_forms(&ex)?;
    phases.mark("closed-forms");
    let mut bounds = closed.checks.clone();
    let mut lower = Value::Null;
    if !a.skip_separation {
        let q = separate_qubits(&ex.system, a.eps, &QubitSeparationOptions::default())?;
        let lb = movement_lower_bound(&ex, &x_matrices(&q.system), q.system.dim() / ex.system.dim())?;
        phases.mark("separate");
        bounds.extend(lb.checks.iter().cloned());
        lower = json!({ "route": q.route, "bound": lb });
    }
    let result = json!({ "n": a.n, "epsilon": a.eps, "closed_forms": closed, "separation": lower });
    Ok((result, bounds))
}

fn pairwise(a: &PairwiseArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    if !(2..=overlap_core::tolerance::MAX_DIM).contains(&a.dim) {
        return usage("--dim must lie in [2, 8192]");
    }
    if a.instances == 0 {
        return usage("--instances must be positive");
    }
    let outcomes = (0..a.instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(a.seed, &format!("pairwise/{i}"));
            let s = Reflection::from_matrix(random_reflection_matrix(&mut rng, a.dim))?;
            let t = Reflection::from_matrix(random_reflection_matrix(&mut rng, a.dim))?;
            let psi = random_state_with(&mut rng, a.dim);
            pairwise_test_detailed(&s, &t, &psi)
        })
        .collect::<Result<Vec<_>, _>>()?;
    phases.mark("evaluate");
    let diff = outcomes
        .iter()
        .map(|o| (o.closed_form - o.channel).abs())
        .fold(0.0, f64::max);
    let accept: Vec<f64> = outcomes.iter().map(|o| o.closed_form).collect();
    let result = json!({
        "dim": a.dim,
        "instances": a.instances,
        "max_closed_vs_channel": diff,
        "min_acceptance": accept.iter().cloned().fold(f64::INFINITY, f64::min),
        "mean_acceptance": accept.iter().sum::<f64>() / accept.len() as f64,
    });
    Ok((result, vec![BoundCheck::new("|closed form − channel|", diff, EXACT)]))
}

fn nqubit(a: &NqubitArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    let b = build_system(&a.system)?;
    phases.mark("fixture");
    let report = match a.shots {
        Some(shots) => {
            let seed = require_seed(a.system.seed, "--shots")?;
            nqubit_test_sample(&b.system, &b.psi, shots, seed)?
        }
        None => nqubit_test_exact(&b.system, &b.psi)?,
    };
    phases.mark("protocol");
    let mut bounds = Vec::new();
    if let Some(mc) = &report.monte_carlo {
        bounds.push(BoundCheck::new(
            "|sampled − exact acceptance| ≤ 4σ",
            (mc.estimate - report.acceptance_exact).abs(),
            4.0 * mc.sigma,
        ));
    }
    let result = json!({ "system": b.info, "protocol": report });
    Ok((result, bounds))
}

fn kcommute(a: &KcommuteArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    let kc = kcommute_construct(a.n, a.k)?;
    phases.mark("construct");
    let protocol = if a.protocol {
        let r = nqubit_test_exact(&kc.system, &kc.psi)?;
        phases.mark("protocol");
        to_value(&r)?
    } else {
        Value::Null
    };
    let bounds = vec![
        BoundCheck::new("max ‖[S_i, T_j]ψ‖, i ≠ j", kc.max_pairwise_residual, 1e-12),
        BoundCheck::new("k-wise permutation residual on ψ", kc.max_permutation_residual, 1e-12),
    ];
    let result = json!({
        "n": kc.n,
        "k": kc.k,
        "dim": kc.system.dim(),
        "padded": kc.padded,
        "basis": kc.basis,
        "max_pairwise_residual": kc.max_pairwise_residual,
        "max_permutation_residual": kc.max_permutation_residual,
        "protocol": protocol,
    });
    Ok((result, bounds))
}

fn counterexample(a: &CounterexampleArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    if a.delta.is_empty() {
        return usage("--delta needs at least one value");
    }
    let cases = a
        .delta
        .iter()
        .map(|&d| blockdiag_counterexample(d))
        .collect::<Result<Vec<_>, _>>()?;
    phases.mark("construct");
    let mut bounds = vec![BoundCheck::new(
        "max ‖[Q,R]ψ‖",
        cases.iter().map(|c| c.qr_on_state).fold(0.0, f64::max),
        1e-12,
    )];
    for c in &cases {
        bounds.push(BoundCheck::at_least(
            format!("δ = {}: ‖[Q',R']ψ‖ > 0", c.delta),
            c.blockdiag_on_state,
            f64::MIN_POSITIVE,
        ));
    }
    let scaling = if a.delta.len() >= 2 {
        let s = counterexample_scaling(&a.delta)?;
        bounds.push(BoundCheck::logged(
            "|log-log slope of ‖[Q',R']ψ‖ − 1|",
            (s.blockdiag_slope - 1.0).abs(),
            0.1,
        ));
        to_value(&s)?
    } else {
        Value::Null
    };
    let summary: Vec<Value> = cases
        .iter()
        .map(|c| {
            json!({
                "delta": c.delta,
                "pq_on_state": c.pq_on_state,
                "pr_on_state": c.pr_on_state,
                "qr_on_state": c.qr_on_state,
                "blockdiag_on_state": c.blockdiag_on_state,
                "projection_defect": c.projection_defect,
            })
        })
        .collect();
    let mut result = json!({ "cases": summary, "scaling": scaling });
    if cases.len() == 1 {
        result["case"] = to_value(&cases[0])?;
    }
    Ok((result, bounds))
}

fn random_sequence<R: Rng>(
    rng: &mut R,
    n: usize,
    max_k: usize,
    seed: u64,
    trial: usize,
) -> Vec<(usize, SingleQubitOp)> {
    let k = rng.gen_range(1..=max_k);
    (0..k)
        .map(|t| {
            let j = rng.gen_range(0..n);
            let u = match rng.gen_range(0..3) {
                0 => SingleQubitOp::pauli(Label::X),
                1 => SingleQubitOp::pauli(Label::Z),
                _ => SingleQubitOp::random_unitary(seed, &format!("epr-lift/u/{trial}/{t}")),
            };
            (j, u)
        })
        .collect()
}

fn lift(a: &EprLiftArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    if a.max_k == 0 {
        return usage("--max-k must be positive");
    }
    let seed = if a.trials > 0 {
        require_seed(a.system.seed, "--trials > 0")?
    } else {
        0
    };
    let b = build_system(&a.system)?;
    phases.mark("fixture");
    let lifted = epr_lift(&b.system, &b.psi)?;
    phases.mark("lift");
    let n = b.system.n();
    let eps = lifted.protocol.epsilon_mean;
    let mut rng = substream(seed, "epr-lift/sequences");
    let sequences: Vec<_> = (0..a.trials)
        .map(|t| random_sequence(&mut rng, n, a.max_k, seed, t))
        .collect();
    let lhs = sequences
        .par_iter()
        .map(|s| simulation_error(&lifted, s))
        .collect::<Result<Vec<_>, _>>()?;
    phases.mark("simulate");
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_ratio = 0.0f64;
    let mut violations = 0usize;
    for (s, &l) in sequences.iter().zip(&lhs) {
        let bound = 8.0 * s.len() as f64 * (2.0 * n as f64 * eps).sqrt();
        worst_excess = worst_excess.max(l - bound);
        if bound > 0.0 {
            worst_ratio = worst_ratio.max(l / bound);
        }
        if l > bound + 1e-12 {
            violations += 1;
        }
    }
    let summary = lifted.summary();
    let mut bounds = vec![
        BoundCheck::new("hat commutation residual", summary.hat_commutation_residual, EXACT),
        BoundCheck::new("switch identity residual", summary.switch_residual, EXACT),
    ];
    if a.trials > 0 {
        bounds.push(BoundCheck::new("max_t (LHS_t − 8k√(2nε))", worst_excess, 1e-12));
    }
    let result = json!({
        "system": b.info,
        "lift": summary,
        "simulation": {
            "trials": a.trials,
            "epsilon": eps,
            "violations": violations,
            "max_ratio": worst_ratio,
            "max_excess": if a.trials > 0 { worst_excess } else { 0.0 },
        },
    });
    Ok((result, bounds))
}

fn rank(a: &SystemArgs, phases: &mut Phases) -> Result<Outcome, CliError> {
    let b = build_system(a)?;
    phases.mark("fixture");
    let lifted = epr_lift(&b.system, &b.psi)?;
    phases.mark("lift");
    let cert = rank_certificate(&lifted)?;
    phases.mark("certificate");
    let bounds = cert.checks.clone();
    let result = json!({ "system": b.info, "lift": lifted.summary(), "certificate": cert });
    Ok((result, bounds))
}
