use thiserror::Error;

/// Failure classes, each mapped to a process exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    /// A degenerate, empty or unreachable numerical outcome.
    #[error("{0}")]
    Numerical(String),

    #[error("{0}")]
    Io(String),

    /// Malformed CSV handed to the plot-script generator.
    #[error("{0}")]
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) | CliError::Format(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
            CliError::Format(_) => "format",
        }
    }

    /// Single-line JSON record for stderr.
    pub fn to_line(&self) -> String {
        serde_json::json!({
            "error": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        })
        .to_string()
    }
}

impl From<schrodobs::Error> for CliError {
    fn from(e: schrodobs::Error) -> Self {
        use schrodobs::Error as E;
        match e {
            E::Config(_) | E::Shape { .. } | E::Range { .. } | E::EmptySet(_) => CliError::Config(e.to_string()),
            E::Contract(_) | E::Domain(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
