use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid scenario at `{path}`: {message}")]
    Parse { path: String, message: String },
    #[error("scenario `{scenario}`: {message}")]
    Precondition { scenario: String, message: String },
    #[error("scenario `{scenario}`: {source}")]
    Core {
        scenario: String,
        #[source]
        source: locce_core::Error,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("output: {0}")]
    Csv(#[from] csv::Error),
    #[error("output: {0}")]
    Json(#[from] serde_json::Error),
}
