use std::path::PathBuf;

use htwist_core::Error as CoreError;
use htwist_numerics::NumericsError;
use thiserror::Error;

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_SPEC: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn core_code(e: &CoreError) -> i32 {
    match e {
        CoreError::Parse { .. }
        | CoreError::SizeMismatch { .. }
        | CoreError::InvalidTable(_)
        | CoreError::NotHadamard => EXIT_SPEC,
        CoreError::SizeBound { .. } | CoreError::InfiniteGroup(_) | CoreError::NotLocallyFree => EXIT_REFUSED,
        _ => EXIT_FAILURE,
    }
}

impl CliError {
    /// Process exit status: 2 for unusable input, 3 when a size or
    /// finiteness bound refuses the computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => EXIT_SPEC,
            CliError::Core(e) => core_code(e),
            CliError::Numerics(NumericsError::Core(e)) => core_code(e),
            CliError::Numerics(NumericsError::TooLarge { .. } | NumericsError::UnsupportedLevel(_)) => EXIT_REFUSED,
            CliError::Numerics(NumericsError::NotHadamard) => EXIT_SPEC,
            CliError::Numerics(_) | CliError::Io { .. } => EXIT_FAILURE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
