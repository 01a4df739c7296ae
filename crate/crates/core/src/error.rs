use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A model or scenario parameter is outside its domain.
    #[error("invalid parameter `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("unknown trace format `{0}` (expected `interval` or `event`)")]
    UnknownFormat(String),

    #[error("trace contains no contacts")]
    EmptyTrace,

    #[error("mean {0} is undefined for this trace")]
    UndefinedMean(&'static str),

    #[error("replay start step {start} plus delay {d} exceeds the {steps} available steps")]
    ScheduleOutOfRange {
        start: usize,
        d: usize,
        steps: usize,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }
}
