use thiserror::Error;

/// Exit status for bad configuration, arguments or I/O.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for failures inside the numerical engine.
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{origin}:{line}: {message}")]
    Syntax {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("[{section}] `{key}`: {reason}")]
    Config {
        section: String,
        key: String,
        reason: String,
    },

    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },

    #[error("JSON output: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Numeric(#[from] olever_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(_) => EXIT_NUMERIC,
            _ => EXIT_CONFIG,
        }
    }

    pub fn config(section: &str, key: &str, reason: impl Into<String>) -> Self {
        CliError::Config {
            section: section.to_string(),
            key: key.to_string(),
            reason: reason.into(),
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }
}
