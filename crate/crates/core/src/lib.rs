// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Quantum thermometry with a dispersively coupled N00N-state interferometer.
//!
//! The crate evaluates the bright-port statistics and quantum Fisher
//! information of a Mach-Zehnder interferometer whose arms couple to an
//! ensemble of thermal two-level atoms, and checks them three ways:
//!
//! - [`analytic`]: closed forms (binomial sum, De Moivre reduction, QFI);
//! - [`oracle`]: exact density-matrix evolution plus spectral QFI;
//! - [`circuit`] / [`simulator`]: a gate-level circuit with ancilla-purified
//!   thermal states, simulated as a statevector and sampled shot by shot.
//!
//! [`estimation`] turns sampled counts into classical Fisher information
//! estimates across repeated experiments.
//!
//! The crate is `no_std` and needs only `alloc`; disable the default `std`
//! feature to take floating-point functions from libm instead.

#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod analytic;
pub mod circuit;
pub mod eigen;
pub mod error;
pub mod estimation;
pub mod hilbert;
pub mod matrix;
pub mod optimize;
pub mod oracle;
pub mod simulator;
pub mod thermal;

pub use analytic::{DeMoivreTerms, MziConfig, NeffOptimum, QfiPoint};
pub use error::{Error, Result};
pub use hilbert::{HilbertLabel, SubsystemTag};
pub use matrix::{kron, ComplexMatrix, C64};
pub use thermal::{BoltzmannFactor, Temperature, ThermalEnsemble};

/// Crate version, embedded in emitted artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
