// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

use alloc::string::String;

/// Errors raised by the toolkit's numerical layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("duplicate subsystem tag {0}")]
    DuplicateTag(String),

    #[error("unknown subsystem tag {0}")]
    UnknownTag(String),

    #[error("{what} = {requested} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("outcome `{outcome}` lies outside the N00N subspace")]
    SubspaceLeak { outcome: String },

    #[error("zero shots recorded")]
    ZeroShots,

    #[error("circuit parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
