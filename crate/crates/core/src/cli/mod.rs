//! Declarative experiment configs and the runner behind the `rmtlab` binary.
//!
//! A run validates its [`ExperimentConfig`] completely, renders every
//! artifact in memory and only then writes the output directory, so a
//! rejected config leaves nothing behind. Every run also writes
//! `manifest.json`, which [`Manifest::config`] can replay.
//!
//! Failures are reported as one line,
//! `error kind=<kind> exit=<code> reason="<message>"`, with exit code 2 for
//! configuration problems and 3 for numerical ones (see [`exit_code`]).

mod config;
mod run;
mod selftest;

pub use config::{
    Command, ExperimentConfig, FblParams, Overrides, Plot, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV,
};
pub use run::{execute, run, Artifacts, Manifest, RunReport, TOOL_NAME};
pub use selftest::{selftest_artifacts, SelftestCheck};

use crate::Error;

/// Process exit code for an error: 3 for numerical failures, 2 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        3
    } else {
        2
    }
}

/// The one-line, machine-parsable failure report.
pub fn error_line(err: &Error) -> String {
    let reason = err.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
    format!("error kind={} exit={} reason=\"{reason}\"", err.kind(), exit_code(err))
}
