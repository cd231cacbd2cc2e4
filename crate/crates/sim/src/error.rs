use polar_rsma_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse { line, message: message.into() }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Core(Error::Constraint { .. }) => "constraint",
            CliError::Core(Error::Config(_)) | CliError::Core(Error::Domain(_)) => "config",
            CliError::Core(_) => "numerical",
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::Failed(_) => "failed",
        }
    }

    /// 2 for bad input, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self.kind() {
            "parse" | "constraint" | "config" | "usage" => 2,
            _ => 3,
        }
    }

    /// `error kind=<kind> [line=<n>] message="<text>"`
    pub fn machine_line(&self) -> String {
        let line = match self {
            CliError::Parse { line, .. } => format!(" line={line}"),
            _ => String::new(),
        };
        let msg = match self {
            CliError::Parse { message, .. } => message.clone(),
            other => other.to_string(),
        };
        format!("error kind={}{line} message=\"{}\"", self.kind(), msg.replace('"', "'"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
