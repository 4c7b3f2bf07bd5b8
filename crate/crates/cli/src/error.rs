use std::path::PathBuf;
use std::process::ExitCode;

use hexasort::engine::EngineError;
use hexasort::format::FormatError;
use hexasort::harness::{GeneratorError, LemmaError};
use hexasort::reductions::ReductionError;
use hexasort::solvers::SolveError;
use thiserror::Error;

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("{0}")]
    Usage(String),
}

fn is_budget(e: &SolveError) -> bool {
    matches!(
        e,
        SolveError::BudgetExceeded { .. } | SolveError::TimeExceeded { .. }
    )
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        let budget = match self {
            CliError::Solve(e) | CliError::Lemma(LemmaError::Search(e)) => is_budget(e),
            _ => false,
        };
        ExitCode::from(if budget { EXIT_BUDGET } else { EXIT_INVALID })
    }
}
