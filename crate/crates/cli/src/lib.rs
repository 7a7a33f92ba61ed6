//! Experiment driver behind the `secrecy-sor` binary: JSON manifests,
//! figure reproduction and CSV output.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod manifest;
pub mod reproduce;
pub mod schemes;
pub mod table;

pub use manifest::ManifestError;

/// Failure of a command, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input; exit code 2.
    #[error(transparent)]
    Manifest(#[from] ManifestError),
    /// Anything that went wrong while computing; exit code 1.
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Manifest(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}
