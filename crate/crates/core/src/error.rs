use thiserror::Error;

use crate::formula::FormulaViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("clause width {k} exceeds variable count {n}")]
    WidthExceedsVariables { n: usize, k: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("assignment is not total: variable {0} is unset")]
    NonTotalAssignment(usize),

    #[error("assignment covers {got} variables, formula has {expected}")]
    AssignmentLength { expected: usize, got: usize },

    #[error("malformed formula: {0}")]
    Formula(#[from] FormulaViolation),

    #[error("no satisfiable draw after {attempts} attempts; this regime is not desk-feasible")]
    AttemptsExhausted { attempts: u64 },

    #[error("{what}: requested 2^{log2_requested:.2} exceeds cap 2^{log2_cap:.2}")]
    CapExceeded {
        what: &'static str,
        log2_requested: f64,
        log2_cap: f64,
    },

    #[error("expected 3 critical points of f', found {found}")]
    RootsNotFound { found: usize },

    #[error("DIMACS line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn cap(what: &'static str, log2_requested: f64, log2_cap: f64) -> Self {
        Error::CapExceeded {
            what,
            log2_requested,
            log2_cap,
        }
    }
}
