// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Thermal ensembles of identical two-level atoms.
//!
//! Populations are Fermi-Dirac, `p_e = 1/(e^{ε/T} + 1)`, and negative
//! temperatures are population-inverted ensembles. Internally everything is
//! expressed through the Boltzmann factor `x = e^{-ε/T}`, which turns `T < 0`
//! into the ordinary range `x > 1`.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::ComplexMatrix;

/// Largest sample register [`gibbs_density`] will materialize (2^M entries on
/// the diagonal, 4^M in the dense matrix).
pub const GIBBS_DENSITY_MAX_QUBITS: usize = 14;

/// Temperature in units of the gap (k_B = 1). `Infinite` is the |T| → ∞ limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Temperature {
    Finite(f64),
    Infinite,
}

impl Temperature {
    /// Rejects T = 0 and non-finite input.
    pub fn finite(t: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(invalid("temperature", "must be finite; use Temperature::Infinite"));
        }
        if t == 0.0 {
            return Err(invalid(
                "temperature",
                "T = 0 is excluded; pass ±δ for the one-sided limit",
            ));
        }
        Ok(Temperature::Finite(t))
    }

    pub fn value(self) -> f64 {
        match self {
            Temperature::Finite(t) => t,
            Temperature::Infinite => f64::INFINITY,
        }
    }
}

/// `x = e^{-ε/T}`, kept together with the exponent so that `ln x` is exact
/// even when `x` itself overflows.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoltzmannFactor {
    /// `-ε/T`; zero at infinite temperature.
    log_x: f64,
}

impl BoltzmannFactor {
    pub fn new(epsilon: f64, temperature: Temperature) -> Self {
        match temperature {
            Temperature::Finite(t) => Self { log_x: -epsilon / t },
            Temperature::Infinite => Self { log_x: 0.0 },
        }
    }

    #[inline]
    pub fn ln(self) -> f64 {
        self.log_x
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.log_x.exp()
    }

    /// `min(x, 1/x)`, always in (0, 1].
    #[inline]
    pub fn folded(self) -> f64 {
        (-self.log_x.abs()).exp()
    }

    #[inline]
    pub fn is_inverted(self) -> bool {
        self.log_x > 0.0
    }

    /// `p_e = x/(1+x)`.
    pub fn excited(self) -> f64 {
        logistic(self.log_x)
    }

    /// `p_g = 1/(1+x)`.
    pub fn ground(self) -> f64 {
        logistic(-self.log_x)
    }

    /// `(ln p_e, ln p_g)`, accurate when either population underflows.
    pub fn log_populations(self) -> (f64, f64) {
        (-softplus(-self.log_x), -softplus(self.log_x))
    }
}

/// `1/(1+e^{-z})` without overflow.
fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
pub(crate) fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `M` non-interacting identical two-level atoms in a Gibbs state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalEnsemble {
    m: usize,
    epsilon: f64,
    temperature: Temperature,
}

impl ThermalEnsemble {
    pub fn new(m: usize, epsilon: f64, temperature: Temperature) -> Result<Self> {
        if m == 0 {
            return Err(invalid("M", "need at least one atom"));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(invalid("epsilon", "gap must be positive and finite"));
        }
        if let Temperature::Finite(t) = temperature {
            Temperature::finite(t)?;
        }
        Ok(Self {
            m,
            epsilon,
            temperature,
        })
    }

    /// Convenience constructor for a finite temperature.
    pub fn at(m: usize, epsilon: f64, temperature: f64) -> Result<Self> {
        Self::new(m, epsilon, Temperature::finite(temperature)?)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn temperature(&self) -> Temperature {
        self.temperature
    }

    #[inline]
    pub fn boltzmann(&self) -> BoltzmannFactor {
        BoltzmannFactor::new(self.epsilon, self.temperature)
    }

    /// `(p_e, p_g)`. The smaller one is computed directly and the larger as
    /// its complement, so the pair sums to one.
    pub fn populations(&self) -> (f64, f64) {
        let b = self.boltzmann();
        if b.is_inverted() {
            let pg = b.ground();
            (1.0 - pg, pg)
        } else {
            let pe = b.excited();
            (pe, 1.0 - pe)
        }
    }
}

pub fn excited_population(ens: &ThermalEnsemble) -> f64 {
    ens.populations().0
}

pub fn ground_population(ens: &ThermalEnsemble) -> f64 {
    ens.populations().1
}

/// Ω with cos Ω = √p_g and sin Ω = √p_e, in [0, π/2].
pub fn rotation_angle(ens: &ThermalEnsemble) -> f64 {
    let (pe, pg) = ens.populations();
    pe.sqrt().atan2(pg.sqrt())
}

/// `⊗_k diag(p_g, p_e)` as a dense 2^M × 2^M matrix.
pub fn gibbs_density(ens: &ThermalEnsemble) -> Result<ComplexMatrix> {
    if ens.m > GIBBS_DENSITY_MAX_QUBITS {
        return Err(Error::CapExceeded {
            what: "M",
            requested: ens.m,
            cap: GIBBS_DENSITY_MAX_QUBITS,
        });
    }
    Ok(ComplexMatrix::from_real_diagonal(&gibbs_diagonal(ens)))
}

/// Diagonal of the Gibbs state; entry `k` has probability `p_e^q p_g^{M-q}`
/// with `q` the Hamming weight of `k`.
pub fn gibbs_diagonal(ens: &ThermalEnsemble) -> Vec<f64> {
    let (pe, pg) = ens.populations();
    let m = ens.m;
    (0..1usize << m)
        .map(|k| {
            let q = k.count_ones() as i32;
            pe.powi(q) * pg.powi(m as i32 - q)
        })
        .collect()
}

/// Equilibrium QFI of the Gibbs state: `M ε²/(4T⁴) sech²(ε/2T)`.
pub fn gibbs_qfi(ens: &ThermalEnsemble) -> f64 {
    match ens.temperature {
        Temperature::Infinite => 0.0,
        Temperature::Finite(t) => {
            let eps = ens.epsilon;
            let t2 = t * t;
            let sech = 1.0 / (eps / (2.0 * t)).cosh();
            ens.m as f64 * eps * eps / (4.0 * t2 * t2) * sech * sech
        }
    }
}

/// `∂p_e/∂T = (ε/T²) p_e p_g`.
pub fn excited_population_derivative(ens: &ThermalEnsemble) -> f64 {
    match ens.temperature {
        Temperature::Infinite => 0.0,
        Temperature::Finite(t) => {
            let (pe, pg) = ens.populations();
            ens.epsilon / (t * t) * pe * pg
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_6};
    use proptest::prelude::*;

    #[test]
    fn fermi_dirac_limits() {
        let hot = ThermalEnsemble::new(1, 1.0, Temperature::Infinite).unwrap();
        assert_eq!(excited_population(&hot), 0.5);
        let big = ThermalEnsemble::at(1, 1.0, 1e12).unwrap();
        assert!((excited_population(&big) - 0.5).abs() < 1e-12);
        let cold = ThermalEnsemble::at(1, 1.0, 1e-3).unwrap();
        assert!(excited_population(&cold) < 1e-300);
        let inverted = ThermalEnsemble::at(1, 1.0, -1e-4).unwrap();
        assert_eq!(excited_population(&inverted), 1.0);
    }

    #[test]
    fn zero_temperature_rejected() {
        assert!(ThermalEnsemble::at(1, 1.0, 0.0).is_err());
        assert!(ThermalEnsemble::at(1, 1.0, f64::NAN).is_err());
        assert!(ThermalEnsemble::at(0, 1.0, 1.0).is_err());
        assert!(ThermalEnsemble::at(1, -1.0, 1.0).is_err());
    }

    #[test]
    fn rotation_angles() {
        let cold = ThermalEnsemble::at(1, 1.0, 1e-3).unwrap();
        assert_eq!(rotation_angle(&cold), 0.0);
        let hot = ThermalEnsemble::new(1, 1.0, Temperature::Infinite).unwrap();
        assert!((rotation_angle(&hot) - FRAC_PI_4).abs() < 1e-15);
        // p_e = 1/4 ⇔ x = 1/3 ⇔ T = 1/ln 3.
        let quarter = ThermalEnsemble::at(1, 1.0, 1.0 / 3.0f64.ln()).unwrap();
        assert!((excited_population(&quarter) - 0.25).abs() < 1e-15);
        assert!((rotation_angle(&quarter) - FRAC_PI_6).abs() < 1e-15);
    }

    #[test]
    fn gibbs_small_cases() {
        // p_e = 0.3 ⇔ x = 3/7.
        let t = -1.0 / (3.0f64 / 7.0).ln();
        let e1 = ThermalEnsemble::at(1, 1.0, t).unwrap();
        let d = gibbs_density(&e1).unwrap();
        assert!(d.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.7, 0.3])) < 1e-15);

        let e2 = ThermalEnsemble::at(2, 1.0, t).unwrap();
        let diag: Vec<f64> = gibbs_density(&e2).unwrap().diagonal().iter().map(|z| z.re).collect();
        let expected = [0.49, 0.21, 0.21, 0.09];
        for (a, b) in diag.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn gibbs_hamming_degeneracy() {
        let ens = ThermalEnsemble::at(3, 1.0, 0.8).unwrap();
        let (pe, pg) = ens.populations();
        let diag = gibbs_diagonal(&ens);
        for q in 0..=3u32 {
            let entries: Vec<f64> = (0..8usize).filter(|k| k.count_ones() == q).map(|k| diag[k]).collect();
            let binom = [1, 3, 3, 1][q as usize];
            assert_eq!(entries.len(), binom);
            for e in entries {
                assert_eq!(e, pe.powi(q as i32) * pg.powi(3 - q as i32));
            }
        }
        let tr: f64 = diag.iter().sum();
        assert!((tr - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gibbs_density_cap() {
        let ens = ThermalEnsemble::at(GIBBS_DENSITY_MAX_QUBITS + 1, 1.0, 1.0).unwrap();
        assert!(matches!(gibbs_density(&ens), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn gibbs_qfi_linear_in_m() {
        let one = ThermalEnsemble::at(1, 1.0, 0.37).unwrap();
        let two = ThermalEnsemble::at(2, 1.0, 0.37).unwrap();
        assert_eq!(gibbs_qfi(&two), 2.0 * gibbs_qfi(&one));
    }

    #[test]
    fn gibbs_qfi_vanishes_at_extremes() {
        let peak = (1..2000)
            .map(|i| gibbs_qfi(&ThermalEnsemble::at(1, 1.0, i as f64 * 1e-3).unwrap()))
            .fold(0.0, f64::max);
        for t in [1e-3, -1e-3, 1e3, -1e3] {
            let q = gibbs_qfi(&ThermalEnsemble::at(1, 1.0, t).unwrap());
            assert!(q < 1e-6 * peak, "T = {t}: {q}");
        }
    }

    proptest! {
        #[test]
        fn populations_are_complementary(t in prop_oneof![-50.0..-1e-3f64, 1e-3..50.0f64]) {
            let ens = ThermalEnsemble::at(1, 1.0, t).unwrap();
            let (pe, pg) = ens.populations();
            prop_assert_eq!(pe + pg, 1.0);
            prop_assert!(pe > 0.0 && pe < 1.0 || t.abs() < 0.002);
            prop_assert_eq!(pe < 0.5, t > 0.0);
        }

        #[test]
        fn gibbs_qfi_even_in_temperature(t in 1e-3..100.0f64, m in 1usize..50) {
            let pos = gibbs_qfi(&ThermalEnsemble::at(m, 1.0, t).unwrap());
            let neg = gibbs_qfi(&ThermalEnsemble::at(m, 1.0, -t).unwrap());
            prop_assert_eq!(pos, neg);
        }

        #[test]
        fn excited_population_monotone_in_x(a in -15.0..15.0f64, b in -15.0..15.0f64) {
            // ln x = -ε/T, so compare through the Boltzmann factor directly.
            prop_assume!(b - a > 1e-6);
            let pa = BoltzmannFactor { log_x: a }.excited();
            let pb = BoltzmannFactor { log_x: b }.excited();
            prop_assert!(pa < pb);
        }
    }
}
