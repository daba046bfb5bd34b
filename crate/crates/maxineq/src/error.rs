use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: field `{field}`: {reason}")]
    Field { path: PathBuf, field: String, reason: String },
    #[error("weight spec `{spec}`: {reason}")]
    WeightSpec { spec: String, reason: String },
    #[error("{0}")]
    Core(#[from] maxineq_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub fn field(path: impl Into<PathBuf>, field: impl Into<String>, reason: impl ToString) -> Self {
        Self::Field {
            path: path.into(),
            field: field.into(),
            reason: reason.to_string(),
        }
    }
}
