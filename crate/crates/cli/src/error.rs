// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

/// Process exit code for malformed invocations.
pub const EXIT_USAGE: i32 = 1;
/// Process exit code for rejected parameters and failed tolerance checks.
pub const EXIT_VALIDATION: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot read config {path}: {reason}")]
    Config { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] mzi_thermo_core::Error),

    #[error("tolerance check failed: {0}")]
    Tolerance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Io { .. } => EXIT_USAGE,
            CliError::Core(_) | CliError::Tolerance(_) => EXIT_VALIDATION,
        }
    }
}

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub type Result<T> = std::result::Result<T, CliError>;
