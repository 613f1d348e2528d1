use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision: {digits} decimal digits requested, at least 16 required")]
    InvalidPrecision { digits: u32 },

    #[error("cannot parse {input:?} as a number")]
    Parse { input: String },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid Butcher tableau: {0}")]
    InvalidTableau(String),

    #[error("{}", pole_message(*.index))]
    Pole { index: Option<usize> },

    #[error("the {scheme} scheme has no canard for the fold singularity")]
    NoCanard { scheme: String },

    #[error("{0} is not defined for this singularity")]
    Unsupported(String),

    #[error("no real branch of the implicit relation")]
    NoRealBranch,

    #[error("argument {0} is outside the principal branch domain")]
    OutOfDomain(String),

    #[error("entry offset is at or past the critical value")]
    PastCriticality,

    #[error("first factor {0} exceeds one: the canard is not contracting at entry")]
    NotContracting(String),

    #[error("not resolved within {max_n} iterations")]
    Unresolved { max_n: usize },

    #[error("no change of jump direction found around h = {h_center}")]
    NoBracket { h_center: String },
}

fn pole_message(index: Option<usize>) -> String {
    match index {
        Some(i) => format!("numeric pole encountered at iterate {i}"),
        None => "numeric pole encountered".to_string(),
    }
}

impl Error {
    /// Attaches the iterate index to a pole error, leaving other errors untouched.
    pub fn at_index(self, index: usize) -> Self {
        match self {
            Error::Pole { index: None } => Error::Pole { index: Some(index) },
            other => other,
        }
    }

    pub fn pole() -> Self {
        Error::Pole { index: None }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
