use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter fell outside its geometric domain.
    #[error("{param} = {value} is out of range: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: String,
    },

    /// The North Pole has no stereographic image.
    #[error("point lies on the North Pole and has no stereographic image")]
    PoleProjection,

    #[error("layout construction failed: {0}")]
    Construction(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn domain(param: &'static str, value: f64, reason: impl Into<String>) -> Self {
        Error::Domain {
            param,
            value,
            reason: reason.into(),
        }
    }

    /// Name of the offending parameter for domain errors.
    pub fn param(&self) -> Option<&'static str> {
        match self {
            Error::Domain { param, .. } => Some(param),
            _ => None,
        }
    }
}
