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


//! Seeded experiment runner over `overlap-core`.
//!
//! Every subcommand writes one JSON [`RunReport`] whose bytes depend only on
//! the configuration; wall-clock timings go to a separate metadata file.

pub mod args;
pub mod report;
pub mod run;
pub mod sweep;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::Parser;

pub use args::{Cli, Command};
pub use report::{CliError, Phases, RunReport, SCHEMA};
pub use run::execute;

pub const THREADS_ENV: &str = "OVERLAP_LAB_THREADS";

/// Caps the global pool at `OVERLAP_LAB_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => return report::usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_ENV}: {e}")))
}

fn meta_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_meta(out: Option<&Path>, phases: &Phases, command: &str) -> Result<(), CliError> {
    if let Some(out) = out {
        let meta = serde_json::to_string_pretty(&phases.meta(command))?;
        std::fs::write(meta_path(out), meta + "\n")?;
    }
    Ok(())
}

fn open_out(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

/// Runs a parsed command line; returns the process exit code.
pub fn run_cli(cli: &Cli) -> Result<i32, CliError> {
    let mut phases = Phases::default();
    let out = cli.out.as_deref();
    let name = cli.command.name();
    if let Command::Sweep(a) = &cli.command {
        let rows = sweep::run_sweep(a, open_out(out)?, &mut phases)?;
        write_meta(out, &phases, name)?;
        let failed: Vec<String> = rows.iter().filter(|r| !r.passed()).map(|r| r.point.to_string()).collect();
        if failed.is_empty() {
            return Ok(0);
        }
        eprintln!("sweep points failing: {}", failed.join(", "));
        return Ok(1);
    }
    let report = execute(&cli.command, &mut phases)?;
    let mut w = open_out(out)?;
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    drop(w);
    phases.mark("write");
    write_meta(out, &phases, name)?;
    if report.pass {
        return Ok(0);
    }
    for b in report.bounds.iter().filter(|b| b.violated()) {
        eprintln!(
            "bound violated: {} (measured {:e}, bound {:e}, margin {:e})",
            b.name, b.measured, b.bound, b.margin
        );
    }
    Ok(1)
}

/// Parses `argv` and runs it, printing errors; returns the exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("{e}");
        return e.exit_code();
    }
    match run_cli(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
