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


//! One-parameter grids over any other subcommand, emitted as CSV.
//!
//! Columns: `point, value, seed, pass, exit_code, error, violated`, then every
//! scalar of the report's `result` object flattened to dotted paths, sorted.
//! Arrays are omitted and nulls print as empty cells. An erroring point keeps
//! its row with `pass` empty and the message in `error`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use clap::Parser;
use rayon::prelude::*;
use serde_json::Value;

use crate::args::{Cli, Command, SweepArgs};
use crate::report::{usage, CliError, Phases, RunReport};
use crate::run::execute;

pub const FIXED_COLUMNS: [&str; 7] = ["point", "value", "seed", "pass", "exit_code", "error", "violated"];

#[derive(Debug, Clone)]
pub struct Row {
    pub point: usize,
    pub value: String,
    pub seed: Option<u64>,
    pub outcome: Result<RunReport, (i32, String)>,
}

impl Row {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, Ok(r) if r.pass)
    }
}

/// Scalars of `v` keyed by dotted path.
pub fn flatten(v: &Value) -> BTreeMap<String, String> {
    fn walk(prefix: &str, v: &Value, out: &mut BTreeMap<String, String>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            Value::Array(_) => {}
            Value::Null => {
                out.insert(prefix.to_string(), String::new());
            }
            Value::String(s) => {
                out.insert(prefix.to_string(), s.clone());
            }
            other => {
                out.insert(prefix.to_string(), other.to_string());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk("", v, &mut out);
    out
}

fn grid(a: &SweepArgs) -> Result<Vec<(String, Option<u64>)>, CliError> {
    let values: Vec<String> = a
        .values
        .iter()
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect();
    if values.is_empty() {
        return usage("sweep grid is empty");
    }
    if a.param.is_empty() || a.param.starts_with('-') {
        return usage("--param takes a flag name without leading dashes");
    }
    let flag = format!("--{}", a.param);
    if a.args.iter().any(|x| x == &flag || x.starts_with(&format!("{flag}="))) {
        return usage(format!("{flag} is both swept and fixed"));
    }
    if a.seeds.is_some() && a.args.iter().any(|x| x == "--seed" || x.starts_with("--seed=")) {
        return usage("--seeds conflicts with a fixed --seed");
    }
    match a.args.first().map(String::as_str) {
        None => return usage("sweep needs an inner subcommand after `--`"),
        Some("sweep") => return usage("sweeps cannot be nested"),
        Some(_) => {}
    }
    if a.seeds == Some(0) {
        return usage("--seeds must be positive");
    }
    let seeds: Vec<Option<u64>> = match a.seeds {
        Some(s) => (0..s).map(Some).collect(),
        None => vec![None],
    };
    Ok(values
        .iter()
        .flat_map(|v| seeds.iter().map(move |&s| (v.clone(), s)))
        .collect())
}

fn run_point(a: &SweepArgs, value: &str, seed: Option<u64>) -> Result<RunReport, (i32, String)> {
    let mut argv = vec!["overlap-lab".to_string()];
    argv.extend(a.args.iter().cloned());
    argv.push(format!("--{}", a.param));
    argv.push(value.to_string());
    if let Some(s) = seed {
        argv.push("--seed".into());
        argv.push(s.to_string());
    }
    let cli = Cli::try_parse_from(&argv).map_err(|e| (2, e.to_string().lines().next().unwrap_or_default().to_string()))?;
    if matches!(cli.command, Command::Sweep(_)) {
        return Err((2, "sweeps cannot be nested".into()));
    }
    let mut phases = Phases::default();
    execute(&cli.command, &mut phases).map_err(|e| (e.exit_code(), e.to_string()))
}

/// Evaluates every grid point; rows come back in grid order.
pub fn sweep(a: &SweepArgs) -> Result<Vec<Row>, CliError> {
    let points = grid(a)?;
    Ok(points
        .into_par_iter()
        .enumerate()
        .map(|(i, (value, seed))| {
            let outcome = run_point(a, &value, seed);
            Row {
                point: i,
                value,
                seed,
                outcome,
            }
        })
        .collect())
}

pub fn write_csv<W: Write>(rows: &[Row], w: W) -> Result<(), CliError> {
    let flat: Vec<BTreeMap<String, String>> = rows
        .iter()
        .map(|r| match &r.outcome {
            Ok(rep) => flatten(&rep.result),
            Err(_) => BTreeMap::new(),
        })
        .collect();
    let columns: BTreeSet<&String> = flat.iter().flat_map(|m| m.keys()).collect();
    let mut out = csv::Writer::from_writer(w);
    let header = FIXED_COLUMNS
        .iter()
        .map(|s| s.to_string())
        .chain(columns.iter().map(|c| c.to_string()));
    out.write_record(header).map_err(|e| CliError::Io(e.to_string()))?;
    for (r, m) in rows.iter().zip(&flat) {
        let (pass, code, error, violated) = match &r.outcome {
            Ok(rep) => (
                rep.pass.to_string(),
                if rep.pass { 0 } else { 1 },
                String::new(),
                rep.violated.join("; "),
            ),
            Err((code, msg)) => (String::new(), *code, msg.clone(), String::new()),
        };
        let fixed = [
            r.point.to_string(),
            r.value.clone(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            pass,
            code.to_string(),
            error,
            violated,
        ];
        let rest = columns.iter().map(|c| m.get(*c).cloned().unwrap_or_default());
        out.write_record(fixed.into_iter().chain(rest))
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

/// Runs the sweep and writes its CSV; timings land in the phase log.
pub fn run_sweep<W: Write>(a: &SweepArgs, w: W, phases: &mut Phases) -> Result<Vec<Row>, CliError> {
    let rows = sweep(a)?;
    phases.mark("points");
    write_csv(&rows, w)?;
    phases.mark("write");
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn args(values: &[&str], seeds: Option<u64>, inner: &[&str]) -> SweepArgs {
        SweepArgs {
            param: "eps".into(),
            values: values.iter().map(|s| s.to_string()).collect(),
            seeds,
            args: inner.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn flatten_uses_dotted_paths_and_skips_arrays() {
        let v = json!({"a": 1.5, "b": {"c": true, "d": [1, 2]}, "e": null, "f": "x"});
        let f = flatten(&v);
        let keys: Vec<&str> = f.keys().map(String::as_str).collect();
        assert_eq!(keys, ["a", "b.c", "e", "f"]);
        assert_eq!(f["a"], "1.5");
        assert_eq!(f["e"], "");
    }

    #[test]
    fn grid_crosses_values_with_seeds() {
        let g = grid(&args(&["1", "2"], Some(3), &["pack-clifford"])).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], ("1".to_string(), Some(0)));
        assert_eq!(g[5], ("2".to_string(), Some(2)));
    }

    #[test]
    fn grid_rejects_bad_configs() {
        for a in [
            args(&[], None, &["movement-example"]),
            args(&[" "], None, &["movement-example"]),
            args(&["1"], None, &["movement-example", "--eps", "0.1"]),
            args(&["1"], Some(2), &["pack-clifford", "--seed", "1"]),
            args(&["1"], None, &["sweep"]),
            args(&["1"], Some(0), &["pack-clifford"]),
        ] {
            assert!(matches!(grid(&a), Err(CliError::Usage(_))), "{a:?}");
        }
    }

    #[test]
    fn csv_header_is_fixed_then_sorted() {
        let rows = sweep(&args(&["0.01", "0.02"], None, &["movement-example", "--n", "2", "--skip-separation"])).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
        assert_eq!(&header[..7], FIXED_COLUMNS);
        let rest = &header[7..];
        assert!(rest.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(text.lines().count(), 3);
    }
}
