// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Closed-form bright-port statistics and QFI of the dispersive MZI.
//!
//! With `x = e^{-ε/T}` and `n = n_eff`, the bright-port probability is the
//! binomial average
//!
//! ```text
//! p₀ = (1+x)^{-M} Σ_q C(M,q) cos²(q n) x^q
//! ```
//!
//! which collapses to `p₀ = ½ α^M cos(Mθ) + ½` with `α e^{iθ} (1+x) = 1 + x e^{2in}`.
//! The QFI on the bright/dark basis is then
//!
//! ```text
//! Q = M² α^{2M} g² cos²(Mθ + Φ) / (1 − α^{2M} cos²(Mθ))
//! ```
//!
//! where `g e^{-iΦ} = C + iD` collects the temperature derivatives of `ln α`
//! and `-θ`. Every quantity is evaluated through the folded factor
//! `w = min(x, 1/x)` so that `T < 0` and `|T| ≪ ε` never overflow.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::optimize::{grid_golden_max, grid_local_maxima, Maximum};
use crate::thermal::{excited_population_derivative, BoltzmannFactor, Temperature, ThermalEnsemble};

/// Largest M for which the binomial sum uses plain coefficients.
const DIRECT_BINOMIAL_MAX_M: usize = 30;

/// Default grid resolution for the n_eff maximization.
pub const NEFF_GRID_POINTS: usize = 2048;

/// Golden-section termination width for the n_eff maximization.
pub const NEFF_TOLERANCE: f64 = 1e-8;

/// Interferometer and sample parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MziConfig {
    n: u32,
    chi: f64,
    t: f64,
    epsilon: f64,
    m: usize,
}

impl MziConfig {
    pub fn new(n: u32, chi: f64, t: f64, epsilon: f64, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("N", "need at least one photon"));
        }
        if m == 0 {
            return Err(invalid("M", "need at least one atom"));
        }
        if !(chi >= 0.0 && chi.is_finite()) {
            return Err(invalid("chi", "must be finite and non-negative"));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(invalid("t", "must be finite and non-negative"));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(invalid("epsilon", "gap must be positive and finite"));
        }
        Ok(Self { n, chi, t, epsilon, m })
    }

    /// `N = χ = 1` with the interaction time chosen to hit `n_eff`.
    pub fn from_neff(n_eff: f64, epsilon: f64, m: usize) -> Result<Self> {
        Self::new(1, 1.0, 0.0, epsilon, m)?.with_neff(n_eff)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn chi(&self) -> f64 {
        self.chi
    }

    #[inline]
    pub fn t(&self) -> f64 {
        self.t
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// `ε N χ t / 2`.
    #[inline]
    pub fn n_eff(&self) -> f64 {
        0.5 * self.epsilon * self.n as f64 * self.chi * self.t
    }

    /// Dispersive phase per excited sample atom on the N-photon arm, `ε N χ t`.
    #[inline]
    pub fn phase_per_excitation(&self) -> f64 {
        2.0 * self.n_eff()
    }

    pub fn with_m(self, m: usize) -> Result<Self> {
        Self::new(self.n, self.chi, self.t, self.epsilon, m)
    }

    pub fn with_n(self, n: u32) -> Result<Self> {
        Self::new(n, self.chi, self.t, self.epsilon, self.m)
    }

    pub fn with_chi_t(self, chi: f64, t: f64) -> Result<Self> {
        Self::new(self.n, chi, t, self.epsilon, self.m)
    }

    /// Retunes the interaction time so that `n_eff` takes the given value.
    /// A zero coupling is promoted to χ = 1 first.
    pub fn with_neff(self, n_eff: f64) -> Result<Self> {
        if !(n_eff >= 0.0 && n_eff.is_finite()) {
            return Err(invalid("n_eff", "must be finite and non-negative"));
        }
        let chi = if self.chi > 0.0 { self.chi } else { 1.0 };
        let t = 2.0 * n_eff / (self.epsilon * self.n as f64 * chi);
        Self::new(self.n, chi, t, self.epsilon, self.m)
    }

    pub fn ensemble(&self, temperature: f64) -> Result<ThermalEnsemble> {
        ThermalEnsemble::at(self.m, self.epsilon, temperature)
    }
}

/// Modulus/argument decomposition of the bright-port sum and its T-derivatives.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeMoivreTerms {
    pub alpha: f64,
    pub theta: f64,
    /// `∂ ln α / ∂T`.
    pub c: f64,
    /// `−∂θ / ∂T`.
    pub d: f64,
    pub g: f64,
    pub phi: f64,
}

impl DeMoivreTerms {
    /// `½ α^M cos(Mθ) + ½`.
    pub fn p0(&self, m: usize) -> f64 {
        0.5 * self.alpha.powi(m as i32) * (m as f64 * self.theta).cos() + 0.5
    }

    /// `½ M α^M g cos(Mθ + Φ)`.
    pub fn dp0_dt(&self, m: usize) -> f64 {
        let mf = m as f64;
        0.5 * mf * self.alpha.powi(m as i32) * self.g * (mf * self.theta + self.phi).cos()
    }

    /// `M² α^{2M} g² cos²(Mθ + Φ)`, the numerator of the closed-form QFI.
    pub fn qfi_numerator(&self, m: usize) -> f64 {
        let mf = m as f64;
        let a2m = self.alpha.powi(2 * m as i32);
        let c = (mf * self.theta + self.phi).cos();
        mf * mf * a2m * self.g * self.g * c * c
    }

    /// `1 − α^{2M} cos²(Mθ)` evaluated literally.
    pub fn qfi_denominator_literal(&self, m: usize) -> f64 {
        let c = (m as f64 * self.theta).cos();
        1.0 - self.alpha.powi(2 * m as i32) * c * c
    }
}

/// QFI value at one operating point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QfiPoint {
    pub temperature: f64,
    pub n_eff: f64,
    pub value: f64,
}

/// Optimal n_eff and the QFI there.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeffOptimum {
    pub n_eff: f64,
    pub value: f64,
}

impl From<Maximum> for NeffOptimum {
    fn from(m: Maximum) -> Self {
        Self {
            n_eff: m.x,
            value: m.value,
        }
    }
}

fn boltzmann(cfg: &MziConfig, temperature: f64) -> Result<BoltzmannFactor> {
    Ok(BoltzmannFactor::new(cfg.epsilon, Temperature::finite(temperature)?))
}

/// Weights `C(M,q) p_e^q p_g^{M-q}` for q = 0..=M.
fn hamming_weights(m: usize, b: BoltzmannFactor) -> Vec<f64> {
    if m <= DIRECT_BINOMIAL_MAX_M {
        let (pe, pg) = if b.is_inverted() {
            let pg = b.ground();
            (1.0 - pg, pg)
        } else {
            let pe = b.excited();
            (pe, 1.0 - pe)
        };
        let mut binom = 1.0;
        (0..=m)
            .map(|q| {
                let w = binom * pe.powi(q as i32) * pg.powi((m - q) as i32);
                binom = binom * (m - q) as f64 / (q + 1) as f64;
                w
            })
            .collect()
    } else {
        let (lpe, lpg) = b.log_populations();
        let mut ln_binom = 0.0;
        (0..=m)
            .map(|q| {
                let w = (ln_binom + q as f64 * lpe + (m - q) as f64 * lpg).exp();
                ln_binom += (((m - q) as f64) / ((q + 1) as f64)).ln();
                w
            })
            .collect()
    }
}

/// `(p₀, p_N)` from positive-term binomial sums; neither suffers cancellation.
/// Normalizing by the total weight makes `p₀ + p_N = 1` hold to rounding.
fn port_probabilities_binomial(m: usize, n_eff: f64, b: BoltzmannFactor) -> (f64, f64) {
    let (p0, pn, total) =
        hamming_weights(m, b)
            .into_iter()
            .enumerate()
            .fold((0.0, 0.0, 0.0), |(p0, pn, total), (q, w)| {
                let (s, c) = (q as f64 * n_eff).sin_cos();
                (p0 + w * c * c, pn + w * s * s, total + w)
            });
    (p0 / total, pn / total)
}

/// Bright-port probability as the Hamming-weight sum over sample configurations.
pub fn p0_binomial(cfg: &MziConfig, temperature: f64) -> Result<f64> {
    let b = boltzmann(cfg, temperature)?;
    Ok(port_probabilities_binomial(cfg.m, cfg.n_eff(), b).0.clamp(0.0, 1.0))
}

fn terms_at(n_eff: f64, epsilon: f64, temperature: f64, b: BoltzmannFactor) -> DeMoivreTerms {
    let w = b.folded();
    let inverted = b.is_inverted();
    let (s2, c2) = (2.0 * n_eff).sin_cos();
    let sn = n_eff.sin();

    // z = 1 + x e^{2in}; for x > 1 factor x out so everything stays bounded.
    let (re, im) = if inverted { (c2 + w, s2) } else { (1.0 + w * c2, w * s2) };
    let modulus = re.hypot(im);
    let r2 = modulus * modulus;
    let alpha = modulus / (1.0 + w);
    let theta = im.atan2(re);

    // dx/dT = (ε/T²) x is the same for either sign of T.
    let k = epsilon / (temperature * temperature);
    let (c, d) = if r2 == 0.0 || k == 0.0 {
        (0.0, 0.0)
    } else {
        let sign = if inverted { -1.0 } else { 1.0 };
        let c = -sign * k * 2.0 * sn * sn * w * (1.0 - w) / ((1.0 + w) * r2);
        let d = -k * s2 * w / r2;
        (c, d)
    };
    DeMoivreTerms {
        alpha,
        theta,
        c,
        d,
        g: c.hypot(d),
        phi: (-d).atan2(c),
    }
}

pub fn demoivre_terms(cfg: &MziConfig, temperature: f64) -> Result<DeMoivreTerms> {
    let b = boltzmann(cfg, temperature)?;
    Ok(terms_at(cfg.n_eff(), cfg.epsilon, temperature, b))
}

/// Bright-port probability from the De Moivre closed form.
pub fn p0_closed(cfg: &MziConfig, temperature: f64) -> Result<f64> {
    Ok(demoivre_terms(cfg, temperature)?.p0(cfg.m).clamp(0.0, 1.0))
}

pub fn dp0_dt(cfg: &MziConfig, temperature: f64) -> Result<f64> {
    Ok(demoivre_terms(cfg, temperature)?.dp0_dt(cfg.m))
}

/// `1 − α^{2M} cos²(Mθ) = 4 p₀ p_N`. When one port probability is tiny the
/// literal form cancels catastrophically, so the product is rebuilt from the
/// positive binomial sums instead.
fn stable_denominator(terms: &DeMoivreTerms, m: usize, n_eff: f64, b: BoltzmannFactor) -> f64 {
    let a = terms.alpha.powi(m as i32) * (m as f64 * terms.theta).cos();
    if a.abs() < 0.9 {
        (1.0 - a) * (1.0 + a)
    } else {
        let (p0, pn) = port_probabilities_binomial(m, n_eff, b);
        4.0 * p0 * pn
    }
}

fn qfi_generic_at(cfg: &MziConfig, n_eff: f64, temperature: f64, b: BoltzmannFactor) -> f64 {
    let terms = terms_at(n_eff, cfg.epsilon, temperature, b);
    let num = terms.qfi_numerator(cfg.m);
    if num == 0.0 {
        return 0.0;
    }
    let den = stable_denominator(&terms, cfg.m, n_eff, b);
    if den <= 0.0 {
        return 0.0;
    }
    (num / den).max(0.0)
}

fn qfi_at(cfg: &MziConfig, n_eff: f64, temperature: f64, b: BoltzmannFactor) -> f64 {
    let terms = terms_at(n_eff, cfg.epsilon, temperature, b);
    // n_eff = kπ: numerator and denominator both vanish; the limit is zero.
    if (2.0 * n_eff).sin().abs() < 1e-9 && terms.qfi_denominator_literal(cfg.m).abs() < 1e-12 {
        return 0.0;
    }
    qfi_generic_at(cfg, n_eff, temperature, b)
}

/// Closed-form QFI on the bright/dark measurement basis, with the removable
/// singularity at `n_eff = kπ` resolved to zero.
pub fn qfi_closed(cfg: &MziConfig, temperature: f64) -> Result<QfiPoint> {
    let b = boltzmann(cfg, temperature)?;
    Ok(QfiPoint {
        temperature,
        n_eff: cfg.n_eff(),
        value: qfi_at(cfg, cfg.n_eff(), temperature, b),
    })
}

/// The closed-form ratio without the `n_eff = kπ` branch.
pub fn qfi_closed_generic(cfg: &MziConfig, temperature: f64) -> Result<f64> {
    let b = boltzmann(cfg, temperature)?;
    Ok(qfi_generic_at(cfg, cfg.n_eff(), temperature, b))
}

/// QFI as a function of n_eff for fixed (ε, M, T); the template's N, χ, t
/// are ignored.
pub fn qfi_of_neff(template: &MziConfig, temperature: f64) -> Result<impl Fn(f64) -> f64> {
    let b = boltzmann(template, temperature)?;
    let cfg = *template;
    Ok(move |n_eff: f64| qfi_at(&cfg, n_eff, temperature, b))
}

/// Global maximum of the QFI over `n_eff ∈ range`.
pub fn qfi_max_over_neff(template: &MziConfig, temperature: f64, range: (f64, f64)) -> Result<NeffOptimum> {
    check_range(range)?;
    let f = qfi_of_neff(template, temperature)?;
    Ok(grid_golden_max(f, range.0, range.1, NEFF_GRID_POINTS, NEFF_TOLERANCE).into())
}

/// Every interior local maximum over `n_eff ∈ range`, ascending in n_eff.
pub fn qfi_local_maxima_over_neff(
    template: &MziConfig,
    temperature: f64,
    range: (f64, f64),
) -> Result<Vec<NeffOptimum>> {
    check_range(range)?;
    let f = qfi_of_neff(template, temperature)?;
    Ok(grid_local_maxima(f, range.0, range.1, NEFF_GRID_POINTS, NEFF_TOLERANCE)
        .into_iter()
        .map(Into::into)
        .collect())
}

/// `[0, 2π]`.
pub const DEFAULT_NEFF_RANGE: (f64, f64) = (0.0, 2.0 * PI);

fn check_range(range: (f64, f64)) -> Result<()> {
    if !(range.0.is_finite() && range.1.is_finite() && range.1 > range.0) {
        return Err(invalid("n_eff range", "need finite lo < hi"));
    }
    Ok(())
}

/// Phase-estimation QFI under the mean-field assumption that the sample
/// imprints the deterministic phase `φ_B = εχt M p_e(T)`: `N² (∂φ_B/∂T)²`.
pub fn qfi_naive_phase(cfg: &MziConfig, temperature: f64) -> Result<f64> {
    let ens = cfg.ensemble(temperature)?;
    let dphi = cfg.epsilon * cfg.chi * cfg.t * cfg.m as f64 * excited_population_derivative(&ens);
    let n = cfg.n as f64;
    Ok(n * n * dphi * dphi)
}

/// Least-squares fit of `Q(M) ≈ c₁M + c₂M²` over M ∈ {1, 2, 3} at the
/// template's n_eff.
pub fn qfi_taylor_coeffs(template: &MziConfig, temperature: f64) -> Result<(f64, f64)> {
    let mut sm2q = 0.0;
    let mut smq = 0.0;
    for m in 1..=3usize {
        let q = qfi_closed(&template.with_m(m)?, temperature)?.value;
        let mf = m as f64;
        smq += mf * q;
        sm2q += mf * mf * q;
    }
    // Normal equations with Σm² = 14, Σm³ = 36, Σm⁴ = 98.
    let det = 14.0 * 98.0 - 36.0 * 36.0;
    let c1 = (98.0 * smq - 36.0 * sm2q) / det;
    let c2 = (14.0 * sm2q - 36.0 * smq) / det;
    Ok((c1, c2))
}
