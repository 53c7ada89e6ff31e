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


//! Report envelope, phase timings and error classes.

use std::fmt;
use std::time::Instant;

use overlap_core::{BoundCheck, Error};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: u32 = 1;

pub fn version() -> &'static str {
    env!("OVERLAP_LAB_VERSION")
}

/// The deterministic report body.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub result: Value,
    pub bounds: Vec<BoundCheck>,
    pub pass: bool,
    /// Names of asserted bounds that failed.
    pub violated: Vec<String>,
}

impl RunReport {
    pub fn new(command: &str, config: Value, result: Value, bounds: Vec<BoundCheck>) -> Self {
        let violated: Vec<String> = bounds
            .iter()
            .filter(|b| b.violated())
            .map(|b| b.name.clone())
            .collect();
        Self {
            schema: SCHEMA,
            version: version().to_string(),
            command: command.to_string(),
            config,
            result,
            pass: violated.is_empty(),
            bounds,
            violated,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Phase {
    pub name: String,
    pub seconds: f64,
}

/// Wall-clock per phase, kept out of the report body.
#[derive(Debug)]
pub struct Phases {
    started: Instant,
    last: Instant,
    phases: Vec<Phase>,
}

impl Default for Phases {
    fn default() -> Self {
        let now = Instant::now();
        Self {
            started: now,
            last: now,
            phases: Vec::new(),
        }
    }
}

impl Phases {
    /// Closes the phase that started at the previous mark.
    pub fn mark(&mut self, name: &str) {
        let now = Instant::now();
        self.phases.push(Phase {
            name: name.to_string(),
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }

    pub fn meta(&self, command: &str) -> Value {
        let unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        serde_json::json!({
            "schema": SCHEMA,
            "version": version(),
            "command": command,
            "finished_unix_s": unix,
            "threads": rayon::current_num_threads(),
            "phases": self.phases,
            "total_seconds": self.started.elapsed().as_secs_f64(),
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration, exit code 2.
    Usage(String),
    Core(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidInput(_)
                | Error::OutOfRange { .. }
                | Error::MemoryBudget { .. }
                | Error::Precondition(_)
                | Error::DimensionTooLarge { .. }
                | Error::DimensionMismatch { .. } => 2,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logged_checks_do_not_fail_the_report() {
        let bounds = vec![BoundCheck::new("a", 1.0, 2.0), BoundCheck::logged("b", 3.0, 2.0)];
        let r = RunReport::new("x", Value::Null, Value::Null, bounds);
        assert!(r.pass);
        assert!(r.violated.is_empty());
    }

    #[test]
    fn violated_checks_are_named() {
        let bounds = vec![BoundCheck::new("a", 3.0, 2.0), BoundCheck::at_least("b", 1.0, 2.0)];
        let r = RunReport::new("x", Value::Null, Value::Null, bounds);
        assert!(!r.pass);
        assert_eq!(r.violated, ["a", "b"]);
        assert_eq!(r.schema, SCHEMA);
    }

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Core(Error::Precondition("x".into())).exit_code(), 2);
        assert_eq!(CliError::Core(Error::Structural("x".into())).exit_code(), 1);
    }
}
