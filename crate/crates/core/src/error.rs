use thiserror::Error;

/// Errors raised while reading or building a project instance.
#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed instance document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("instance must contain at least one job")]
    NoJobs,
    #[error("horizon must be at least 1 day")]
    EmptyHorizon,
    #[error("duplicate job id {0:?}")]
    DuplicateJob(String),
    #[error("unknown job id {0:?} in precedence pair")]
    UnknownJob(String),
    #[error("job {id:?} has duration 0; durations must be at least 1")]
    ZeroDuration { id: String },
    #[error("job {id:?} has duration {duration} > horizon {horizon}")]
    DurationExceedsHorizon {
        id: String,
        duration: u32,
        horizon: u32,
    },
    #[error("job {0:?} cannot precede itself")]
    SelfPrecedence(String),
    #[error("precedence table must be {expected}x{expected}")]
    FrontShape { expected: usize },
}

/// Shape mismatch between a schedule and the instance it is evaluated against.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("schedule is {rows}x{cols}, instance expects {jobs}x{days}")]
pub struct DimensionMismatch {
    pub rows: usize,
    pub cols: usize,
    pub jobs: usize,
    pub days: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error("row {row} out of range 1..={rows}")]
    RowOutOfRange { row: usize, rows: usize },
    #[error("schedule cell ({row},{col}) holds {value}; only 0 and 1 are allowed")]
    NotBinary { row: usize, col: usize, value: u8 },
    #[error("schedule rows have unequal lengths")]
    Ragged,
    #[error("schedule must have at least one row and one column")]
    Empty,
    #[error("cannot take the variance of an empty profile")]
    EmptyProfile,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("instance has fatal diagnostics: {0}")]
    Instance(String),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state space of {size} start vectors exceeds the enumeration limit {limit}")]
    GuardExceeded { size: u128, limit: u128 },
    #[error("no schedule satisfies the precedence table within the horizon")]
    Infeasible,
}
