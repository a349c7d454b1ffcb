use std::path::PathBuf;

/// Errors from files, formats and command handling.
#[derive(Debug, thiserror::Error)]
pub enum PstError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}: unsupported version {found} (this build reads up to {supported})")]
    Version { what: &'static str, found: u32, supported: u32 },
    #[error("{what}: field `{field}`: {msg}")]
    Field { what: &'static str, field: String, msg: String },
    #[error("{what}: row {row}, column `{column}`: {msg}")]
    Row { what: String, row: usize, column: String, msg: String },
    #[error(transparent)]
    Core(#[from] pst_core::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T, E = PstError> = std::result::Result<T, E>;

impl PstError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> PstError {
        PstError::Io { path: path.into(), source }
    }

    pub fn field(what: &'static str, field: impl Into<String>, msg: impl ToString) -> PstError {
        PstError::Field { what, field: field.into(), msg: msg.to_string() }
    }

    pub fn usage(msg: impl Into<String>) -> PstError {
        PstError::Usage(msg.into())
    }

    /// 1 usage, 2 data, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            PstError::Usage(_) | PstError::Core(pst_core::Error::InvalidConfig(_)) => 1,
            PstError::Field { what: "config", .. } => 1,
            PstError::Core(pst_core::Error::NonFiniteLoss { .. }) => 3,
            _ => 2,
        }
    }
}
