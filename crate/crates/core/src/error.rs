use thiserror::Error;

use crate::model::{JobId, Slot};

pub type Result<T, E = EasError> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Each variant carries a stable kebab-case code (see [`EasError::code`]) that
/// the CLI prints and tests match on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EasError {
    #[error("unknown-job: job {0} is not part of the instance")]
    UnknownJob(JobId),
    #[error("bad-slot: slot {slot} is outside [1, {max}]")]
    BadSlot { slot: Slot, max: Slot },
    #[error("no-jobs: the instance has no jobs")]
    NoJobs,
    #[error("not-common-window: jobs do not share one release time and due date")]
    NotCommonWindow,
    #[error("bad-epsilon: epsilon must be a rational strictly between 0 and 1, got {0}")]
    BadEpsilon(String),
    #[error("too-large-for-oracle: {0}")]
    TooLargeForOracle(String),
    #[error("no-certificate: {0}")]
    NoCertificate(String),
    #[error("harvest-length: harvest has {found} entries but horizon is {horizon}")]
    HarvestLength { found: usize, horizon: usize },
    #[error("duplicate-id: job id {0} appears more than once")]
    DuplicateId(JobId),
    #[error("negative-value: {0}")]
    NegativeValue(String),
    #[error("bad-window: job {id} has release {release} and due {due}")]
    BadWindow { id: JobId, release: i64, due: i64 },
    #[error("due-after-horizon: job {id} is due at {due} but the horizon is {horizon}")]
    DueAfterHorizon { id: JobId, due: Slot, horizon: Slot },
    #[error("bad-horizon: horizon must be at least 1")]
    BadHorizon,
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("table-too-large: {cells} cells exceeds the limit of {limit}")]
    TableTooLarge { cells: u128, limit: u128 },
    #[error("bad-input: {0}")]
    BadInput(String),
    #[error("parse: {0}")]
    Parse(String),
}

impl EasError {
    pub fn code(&self) -> &'static str {
        match self {
            EasError::UnknownJob(_) => "unknown-job",
            EasError::BadSlot { .. } => "bad-slot",
            EasError::NoJobs => "no-jobs",
            EasError::NotCommonWindow => "not-common-window",
            EasError::BadEpsilon(_) => "bad-epsilon",
            EasError::TooLargeForOracle(_) => "too-large-for-oracle",
            EasError::NoCertificate(_) => "no-certificate",
            EasError::HarvestLength { .. } => "harvest-length",
            EasError::DuplicateId(_) => "duplicate-id",
            EasError::NegativeValue(_) => "negative-value",
            EasError::BadWindow { .. } => "bad-window",
            EasError::DueAfterHorizon { .. } => "due-after-horizon",
            EasError::BadHorizon => "bad-horizon",
            EasError::Overflow(_) => "overflow",
            EasError::TableTooLarge { .. } => "table-too-large",
            EasError::BadInput(_) => "bad-input",
            EasError::Parse(_) => "parse",
        }
    }

    /// Errors caused by malformed input text rather than by a solver
    /// refusing a well-formed instance.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            EasError::Parse(_)
                | EasError::HarvestLength { .. }
                | EasError::DuplicateId(_)
                | EasError::NegativeValue(_)
                | EasError::BadWindow { .. }
                | EasError::BadHorizon
        )
    }
}

impl From<serde_json::Error> for EasError {
    fn from(err: serde_json::Error) -> Self {
        EasError::Parse(err.to_string())
    }
}
