use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation not supported for {domain}: {what}")]
    Unsupported { domain: String, what: String },

    #[error("vertex enumeration refused: {count} vertices exceeds cap {cap}")]
    TooManyVertices { count: String, cap: usize },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        what: &'static str,
        best: Vec<f64>,
        residual: f64,
        iterations: usize,
    },

    #[error("degenerate affine solve in min-norm-point search after {restarts} restarts")]
    Degenerate { restarts: usize },

    #[error("degenerate cost: objective is constant over the domain, suboptimality gap undefined")]
    DegenerateGap,

    #[error("missing constant `{0}`")]
    MissingConstant(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("round {round}: {source}")]
    AtRound {
        round: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 2 config, 3 numeric non-convergence, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotConverged { .. } | Error::Degenerate { .. } => 3,
            Error::Io { .. } => 4,
            Error::AtRound { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn at_round(self, round: usize) -> Error {
        match self {
            e @ Error::AtRound { .. } => e,
            e => Error::AtRound {
                round,
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn check_finite(x: &[f64], what: &'static str) -> Result<()> {
    if x.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
