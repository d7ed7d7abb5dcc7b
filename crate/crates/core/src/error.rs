use thiserror::Error;

/// Errors produced anywhere in the walk pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A tabulated phase schedule was asked for a step it does not cover.
    #[error("phase schedule exhausted: step {index} requested but table has {len} entries")]
    ScheduleExhausted { index: usize, len: usize },

    /// An argument fell outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration or state failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The analytic kernel diverges because the accumulated displacement vanishes.
    #[error("singular time tau = {tau}: |s(tau)| = {s:e} is below threshold")]
    SingularTime { tau: f64, s: f64 },

    /// An iterative numerical method ran out of budget before meeting its tolerance.
    #[error("accuracy not reached: best estimate {estimate} with error bound {error_bound:e}")]
    Accuracy { estimate: f64, error_bound: f64 },

    /// The requested analysis does not apply to the given parameters.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 3,
            Error::Accuracy { .. } => 4,
            _ => 2,
        }
    }
}
