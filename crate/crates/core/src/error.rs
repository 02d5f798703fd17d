use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("total half-edge count {0} is odd; apply the parity fix before matching")]
    OddHalfEdges(u64),

    #[error("degree basis `original` requested but no degree sequence was attached")]
    MissingDegreeSequence,

    #[error("graph has no vertex of degree >= 2, clustering is undefined")]
    NoWedges,

    #[error("slope fit needs at least {required} non-empty bins in range, found {found}")]
    TooFewBins { required: usize, found: usize },

    #[error("quadrature tolerance not met: value {value:e}, error estimate {estimate:e}, requested {requested:e}")]
    ToleranceNotMet {
        value: f64,
        estimate: f64,
        requested: f64,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Stable, machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::OddHalfEdges(_) => "odd_half_edges",
            Error::MissingDegreeSequence => "missing_degree_sequence",
            Error::NoWedges => "no_wedges",
            Error::TooFewBins { .. } => "too_few_bins",
            Error::ToleranceNotMet { .. } => "tolerance_not_met",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
