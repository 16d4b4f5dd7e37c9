use std::path::PathBuf;

use deploygrip_core::Violation;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("malformed config {path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("invalid value for `{key}`: {message}")]
    Input { key: String, message: String },
    #[error("design violates {}", describe(.0))]
    Validation(Vec<Violation>),
    #[error("{0}")]
    Model(deploygrip_core::Error),
    #[error("malformed csv {path}: {message}")]
    Csv { path: PathBuf, message: String },
    #[error("unmatched keys: {}", .0.join("; "))]
    UnmatchedKeys(Vec<String>),
    #[error("no feasible design: {0}")]
    Infeasible(String),
}

fn describe(v: &[Violation]) -> String {
    v.iter().map(|x| format!("`{}` ({})", x.field, x.rule)).collect::<Vec<_>>().join(", ")
}

impl CliError {
    pub fn input(key: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Input { key: key.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Model(e) if e.is_numeric() => 3,
            CliError::Infeasible(_) => 4,
            _ => 2,
        }
    }
}

impl From<deploygrip_core::Error> for CliError {
    fn from(e: deploygrip_core::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CliError::Write(io),
            other => CliError::Write(std::io::Error::other(format!("{other:?}"))),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
