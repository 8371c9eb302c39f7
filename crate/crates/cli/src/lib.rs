//! Batch experiment runner for `unibound-core`.
//!
//! A run reads a config, validates it, executes the requested pipeline from
//! the root seed, and writes `result.<kind>.json` plus `table.csv` to the
//! output directory.

pub mod config;
pub mod error;
pub mod executor;
pub mod output;
pub mod pipeline;
pub mod plan;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::{exit, CliError};
pub use executor::RayonExecutor;
pub use plan::{Plan, Violation};

use output::{ResultRecord, WrittenFiles};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub override_numeric: bool,
}

pub struct RunReport {
    pub files: WrittenFiles,
    pub record: ResultRecord,
    pub summary: Vec<String>,
}

impl RunReport {
    pub fn failed_checks(&self) -> impl Iterator<Item = &output::Check> {
        self.record.checks.iter().filter(|c| !c.passed)
    }

    pub fn exit_code(&self) -> u8 {
        if self.failed_checks().next().is_some() {
            exit::INVARIANT
        } else {
            exit::OK
        }
    }
}

/// Loads and validates a config, applying command-line overrides first.
pub fn prepare(path: &Path, opts: &RunOptions) -> Result<Plan, CliError> {
    let mut config = plan::load(path)?;
    if let Some(seed) = opts.seed {
        config.seed = seed;
    }
    if let Some(out) = &opts.out {
        config.out = Some(out.clone());
    }
    plan::validate(config, opts.override_numeric).map_err(CliError::Invalid)
}

pub fn run(path: &Path, opts: &RunOptions) -> Result<RunReport, CliError> {
    let plan = prepare(path, opts)?;
    let exec = RayonExecutor::new(opts.workers)?;
    let output = pipeline::execute(&plan, &exec)?;
    let kind = plan.config.kind;
    let dir = plan.config.out.clone().unwrap_or_else(|| PathBuf::from("results").join(kind.name()));
    let record = ResultRecord {
        artifact: "unibound",
        version: env!("CARGO_PKG_VERSION"),
        kind: kind.name(),
        config: serde_json::to_value(&plan.config).map_err(|e| CliError::Io(e.to_string()))?,
        outputs: output.outputs,
        checks: output.checks,
        timing: output.timing,
    };
    let files = output::write(&dir, &record, &output.table)?;
    Ok(RunReport { files, record, summary: output.summary })
}
