//! Command-line front end: figure tables as CSV/JSON and a verification run.

pub mod commands;
pub mod config;
pub mod table;
pub mod verify;

use std::path::PathBuf;

pub use config::{Axis, Command, Format, RunConfig};
pub use table::{Cell, Table};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Accuracy(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Io { .. } => 2,
            RunError::Accuracy(_) => 3,
        }
    }
}

impl From<dipole_focus::Error> for RunError {
    fn from(e: dipole_focus::Error) -> Self {
        match e {
            dipole_focus::Error::Accuracy { .. } => RunError::Accuracy(e.to_string()),
            other => RunError::Config(other.to_string()),
        }
    }
}

/// A finished run; `failed` is set when an invariant check did not hold.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub table: Table,
    pub failed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed)
    }

    pub fn render(&self, cfg: &RunConfig) -> Result<String, RunError> {
        match cfg.format {
            Format::Csv => self.table.to_csv(),
            Format::Json => Ok(self.table.to_json(&cfg.to_pairs())),
        }
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, RunError> {
    let table = match cfg.command {
        Command::K0Curve => commands::k0_curve(cfg)?,
        Command::TMap => commands::t_map(cfg)?,
        Command::Spectrum => commands::spectrum(cfg)?,
        Command::FocalProfile => commands::focal_profile(cfg)?,
        Command::ModeContent => commands::mode_content(cfg)?,
        Command::Verify => {
            let report = verify::run_checks(cfg)?;
            let failed = report.iter().any(|c| !c.passed());
            return Ok(Outcome {
                table: verify::to_table(&report),
                failed,
            });
        }
    };
    Ok(Outcome { table, failed: false })
}
