use unialg::Error;

/// Failures mapped onto the exit-code contract.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable, malformed or inconsistent input. Exit 2.
    #[error("{0}")]
    Input(String),
    /// A configured size bound was exceeded. Exit 3.
    #[error("{0}")]
    Bound(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Bound(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_resource_bound() {
            CliError::Bound(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}
