//! Config files, CSV reports and parallel drivers around `dasian-core`.

pub mod config;
pub mod parallel;
pub mod report;
pub mod run;

use std::fmt;
use std::path::{Path, PathBuf};

pub use config::{parse_config, serialize, ConfigErrors, EngineKind, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Config(#[from] ConfigErrors),
    #[error("model error: {0}")]
    Model(#[from] dasian_core::Error),
    #[error("refused: {0}")]
    Refused(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl AppError {
    /// Process exit code: 2 for anything the user has to fix, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Refused(_) => 2,
            AppError::Model(_) | AppError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verb {
    Price,
    Verify,
    Converge,
}

impl fmt::Display for Verb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verb::Price => "price",
            Verb::Verify => "verify",
            Verb::Converge => "converge",
        })
    }
}

/// Outcome of one CLI run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
    pub out_dir: PathBuf,
}

/// Runs `verb` and writes its reports into `out_dir` (created if needed).
pub fn execute(verb: Verb, cfg: &RunConfig, out_dir: &Path) -> Result<Outcome, AppError> {
    let (passed, summary) = match verb {
        Verb::Price => {
            let rep = run::run_price(cfg)?;
            std::fs::create_dir_all(out_dir)?;
            rep.write(out_dir)?;
            (rep.passed(), rep.summary())
        }
        Verb::Verify => {
            let rep = run::run_verify(cfg)?;
            std::fs::create_dir_all(out_dir)?;
            rep.write(out_dir)?;
            (rep.passed(), rep.summary())
        }
        Verb::Converge => {
            let rep = run::run_convergence_study(cfg)?;
            std::fs::create_dir_all(out_dir)?;
            rep.write(out_dir)?;
            (rep.passed(), rep.summary())
        }
    };
    Ok(Outcome { passed, summary, out_dir: out_dir.to_path_buf() })
}
