use std::path::PathBuf;

use thiserror::Error;

use crate::dsl::{DslError, TableFileError};
use crate::registry::RegistryError;
use crate::variety::VarietyError;

/// Every failure here is an input error: bad syntax, bad tables, or
/// references that do not resolve.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error("{path}: {source}")]
    TableFile { path: PathBuf, source: TableFileError },
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
