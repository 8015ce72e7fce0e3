use ncps_core::{AlgebraError, CliffordError, ParseError, SymbolError};
use ncps_num::NumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown check {0:?}; run `ncps list`")]
    UnknownCheck(String),
    #[error("bad value for {flag}: {message}")]
    BadFlag { flag: &'static str, message: String },
    #[error("family file {path}: {message}")]
    FamilyFile { path: String, message: String },
    #[error("cannot write {path}: {source}")]
    Output { path: String, source: std::io::Error },
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Numeric(#[from] NumError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
}

impl CliError {
    pub fn flag(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::BadFlag { flag, message: message.into() }
    }

    /// Every error is a usage, configuration or engine refusal.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
