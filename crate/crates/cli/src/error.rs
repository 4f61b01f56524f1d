use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INTERNAL: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const EVIDENCE: i32 = 3;
    pub const MODE_UNAVAILABLE: i32 = 4;
    pub const EXHAUSTED: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{0}")]
    Validation(String),

    #[error("element `{name}`: {source}")]
    Element { name: String, source: puhyp::Error },

    #[error(transparent)]
    Core(#[from] puhyp::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use puhyp::Error as E;
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Validation(_) => exit::INPUT,
            CliError::Element { source, .. } | CliError::Core(source) => match source {
                E::ModeUnavailable(_) => exit::MODE_UNAVAILABLE,
                E::BudgetExceeded { .. } | E::SearchExhausted { .. } => exit::EXHAUSTED,
                E::InternalInvariant(_) => exit::INTERNAL,
                _ => exit::INPUT,
            },
        }
    }
}
