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


use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_overlap-lab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn overlap-lab")
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("report is JSON")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("missing column {name}"))
}

#[test]
fn nqubit_test_on_paulis_accepts() {
    let o = run(&["nqubit-test", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json_stdout(&o);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "nqubit-test");
    assert_eq!(r["result"]["protocol"]["acceptance_exact"].as_f64(), Some(1.0));
    assert_eq!(r["pass"], true);
}

#[test]
fn kcommute_4_2_has_dimension_12() {
    let o = run(&["kcommute", "--n", "4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json_stdout(&o);
    assert_eq!(r["result"]["dim"], 12);
    assert!(r["result"]["max_pairwise_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn separate_proj_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for p in &paths {
        let o = run(&["separate-proj", "--n", "4", "--eps", "0.005", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let meta: Value = serde_json::from_slice(&std::fs::read(format!("{}.meta.json", p.display())).unwrap()).unwrap();
        assert!(meta["phases"].as_array().is_some_and(|a| !a.is_empty()));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    assert_eq!(a, b);
}

#[test]
fn thread_cap_does_not_change_the_report() {
    let args = ["nqubit-test", "--fixture", "perturbed", "--n", "3", "--strength", "0.05", "--seed", "3"];
    let a = bin().args(args).env("OVERLAP_LAB_THREADS", "1").output().unwrap();
    let b = bin().args(args).env("OVERLAP_LAB_THREADS", "4").output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let bad = bin().args(args).env("OVERLAP_LAB_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn invalid_configs_exit_2() {
    for args in [
        &["kcommute", "--n", "2", "--k", "3"][..],
        &["separate-proj", "--n", "4", "--eps", "0.005"],
        &["separate-proj", "--n", "4", "--eps", "1.5", "--seed", "1"],
        &["nqubit-test", "--fixture", "perturbed", "--n", "2", "--strength", "0.1"],
        &["nqubit-test", "--n", "2", "--shots", "10"],
        &["nqubit-test", "--n", "2", "--m", "3"],
        &["counterexample", "--delta", "0.3"],
        &["bogus"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn violated_bound_exits_1_and_is_named() {
    let o = run(&["pack-clifford", "--n", "5", "--m", "4", "--seed", "0", "--overlap-constant", "0.01"]);
    assert_eq!(o.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(stderr.contains("max overlap ≤ 0.01·epsilon_achieved"), "{stderr}");
    let r = json_stdout(&o);
    assert_eq!(r["pass"], false);
    assert_eq!(r["violated"][0], "max overlap ≤ 0.01·epsilon_achieved");
}

#[test]
fn every_bound_lists_measured_bound_and_margin() {
    let o = run(&["swap-separate", "--fixture", "clifford", "--n", "3", "--m", "2", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json_stdout(&o);
    let bounds = r["bounds"].as_array().unwrap();
    assert!(!bounds.is_empty());
    for b in bounds {
        for key in ["name", "measured", "bound", "margin", "pass", "asserted"] {
            assert!(b.get(key).is_some(), "{key} missing in {b}");
        }
    }
}

#[test]
fn movement_sweep_matches_closed_form() {
    let values = "0.001,0.002,0.003,0.004,0.005,0.006,0.007,0.008,0.009,0.01";
    let o = run(&["sweep", "--param", "eps", "--values", values, "--", "movement-example", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 10);
    let (d, e, eps) = (
        column(&h, "closed_forms.xjxk_defect"),
        column(&h, "closed_forms.xjxk_expected"),
        column(&h, "epsilon"),
    );
    for row in rows {
        let defect: f64 = row[d].parse().unwrap();
        let eps: f64 = row[eps].parse().unwrap();
        let closed = 2.0 * (4.0 * eps / 2.0).sin().abs();
        assert!((defect - closed).abs() <= 1e-9, "{defect} vs {closed}");
        assert!((defect - row[e].parse::<f64>().unwrap()).abs() <= 1e-9);
    }
}

#[test]
fn packing_sweep_is_monotone_in_m() {
    let o = run(&[
        "sweep", "--param", "m", "--values", "2,4,8,16", "--seeds", "100", "--", "pack-clifford", "--n", "4",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 400);
    let (v, e) = (column(&h, "value"), column(&h, "epsilon_achieved"));
    let mut means = Vec::new();
    for m in ["2", "4", "8", "16"] {
        let xs: Vec<f64> = rows.iter().filter(|r| r[v] == m).map(|r| r[e].parse().unwrap()).collect();
        means.push(xs.iter().sum::<f64>() / xs.len() as f64);
    }
    assert!(means.windows(2).all(|w| w[0] <= w[1]), "{means:?}");
}

#[test]
fn sweep_rows_keep_failures() {
    let o = run(&["sweep", "--param", "eps", "--values", "0.01,2.0", "--", "movement-example", "--n", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][column(&h, "pass")], "true");
    assert_eq!(rows[1][column(&h, "exit_code")], "2");
    assert!(!rows[1][column(&h, "error")].is_empty());
}

#[test]
fn empty_grid_is_a_usage_error() {
    let o = run(&["sweep", "--param", "eps", "--values", "", "--", "movement-example", "--n", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("grid is empty"));
}

#[test]
fn dump_writes_operators() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("ops.json");
    let o = run(&["separate-proj", "--n", "3", "--eps", "0.005", "--seed", "2", "--dump", dump.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&std::fs::read(Path::new(&dump)).unwrap()).unwrap();
    assert_eq!(v["inputs"].as_array().unwrap().len(), 3);
    assert_eq!(v["outputs"].as_array().unwrap().len(), 3);
}
