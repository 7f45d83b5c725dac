use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("subspace is not contained in the ambient subspace")]
    NotContained,
    #[error("pencil is singular")]
    SingularPencil,
    #[error("split failure: {0}")]
    SplitFailure(String),
    #[error("map sequence does not stabilize within the supplied terms")]
    NoStabilization,
    #[error("points must be distinct")]
    EqualPoints,
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("windows or fields differ")]
    WindowMismatch,
    #[error("not admissible: {0}")]
    NotAdmissible(String),
    #[error("every point of the field is excluded")]
    FieldExhausted,
    #[error("classification verdicts disagree: {0}")]
    Disagreement(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotContained => "NOT_CONTAINED",
            Error::SingularPencil => "SINGULAR_PENCIL",
            Error::SplitFailure(_) => "SPLIT_FAILURE",
            Error::NoStabilization => "NO_STABILIZATION",
            Error::EqualPoints => "EQUAL_POINTS",
            Error::WindowTooSmall(_) => "WINDOW_TOO_SMALL",
            Error::WindowMismatch => "WINDOW_MISMATCH",
            Error::NotAdmissible(_) => "NOT_ADMISSIBLE",
            Error::FieldExhausted => "FIELD_EXHAUSTED",
            Error::Disagreement(_) => "DISAGREEMENT",
            Error::Format(_) => "FORMAT",
            Error::Io(_) => "IO",
        }
    }

    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotAdmissible(_)
            | Error::SingularPencil
            | Error::NotContained
            | Error::Disagreement(_) => 1,
            Error::WindowTooSmall(_) | Error::NoStabilization => 2,
            Error::SplitFailure(_) | Error::FieldExhausted => 3,
            Error::EqualPoints | Error::WindowMismatch | Error::Format(_) | Error::Io(_) => 4,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
