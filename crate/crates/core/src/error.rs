use thiserror::Error;

use crate::bounds::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("precision not attained in {func}: {detail}")]
    PrecisionNotAttained { func: &'static str, detail: String },

    #[error("quadrature error {error:.3e} exceeds 1% of margin {margin:.3e} ({what})")]
    QuadraturePrecision {
        what: String,
        error: f64,
        margin: f64,
    },

    #[error("parameter validation failed: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("no valid point in the search region")]
    NoValidPoint,

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}

fn format_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
