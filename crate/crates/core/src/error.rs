use thiserror::Error;

/// Errors raised by the engine.
///
/// Missing data is not an error: absent observations and undefined
/// components travel as [`crate::Reason`] values instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("conflicting values for ({country}, {year}, {indicator}): {first} vs {second}")]
    Conflict {
        country: String,
        year: i32,
        indicator: String,
        first: f64,
        second: f64,
    },

    #[error("lookup failed: {0}")]
    Lookup(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular design matrix (rank {rank} < {columns} columns)")]
    SingularDesign { rank: usize, columns: usize },

    #[error("insufficient observations: {n_obs} rows for {n_params} parameters")]
    SampleSize { n_obs: usize, n_params: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
