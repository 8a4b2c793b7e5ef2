use kadison_core::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] Error),
    /// The command ran to completion but the guarantee it checks failed; the
    /// report has been written.
    #[error("{0}")]
    Bound(String),
}

impl CliError {
    pub const USAGE: u8 = 2;
    pub const BOUND: u8 = 3;
    pub const CAPABILITY: u8 = 4;

    pub(crate) fn stdio(source: std::io::Error) -> Self {
        Self::Io {
            path: "<stdio>".into(),
            source,
        }
    }

    /// `2` usage or validation, `3` bound or descent failure, `4` capability
    /// refusal.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Bound(_) => Self::BOUND,
            Self::Core(Error::DescentAbort { .. } | Error::NotRealRooted { .. }) => Self::BOUND,
            Self::Core(Error::Capability(_)) => Self::CAPABILITY,
            _ => Self::USAGE,
        }
    }
}
