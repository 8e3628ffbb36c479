use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("scenario parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("empty hypothesis set")]
    EmptyHypotheses,
    #[error("observation is inconsistent with the transition function at t={0}")]
    InconsistentObservation(usize),
    #[error("oracle refuses a {0}-state world (limit {1})")]
    OracleTooLarge(usize, usize),
    #[error("unknown scenario id {0}")]
    UnknownScenario(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
