use alloc::string::String;

use crate::lstsq::ConditionReport;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A mathematical or algorithmic precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("value {value} lies outside [-1, 1]")]
    Domain { value: f64 },

    #[error("under-determined system: {points} points for {unknowns} basis functions")]
    Underdetermined { points: usize, unknowns: usize },

    /// The scaled design matrix is numerically rank deficient. The report is
    /// kept because the conditioning itself is a result.
    #[error("singular system (cond_D = {:e})", report.cond_d)]
    Singular { report: ConditionReport },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
