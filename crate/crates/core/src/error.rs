use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A skill demanded by a task is held by no expert, so full coverage is impossible.
    #[error("infeasible: skill {skill} of task {task} is not held by any expert")]
    Infeasible { task: usize, skill: usize },

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("LP solver failure: {reason} (max covering violation {covering_residual:.3e}, max load violation {load_residual:.3e})")]
    SolverFailure {
        reason: String,
        covering_residual: f64,
        load_residual: f64,
    },

    #[error("instance too large for exhaustive search: n*k = {cells} exceeds {limit}")]
    TooLarge { cells: usize, limit: usize },

    #[error("parse error at {file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("generation error: {0}")]
    Generation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
