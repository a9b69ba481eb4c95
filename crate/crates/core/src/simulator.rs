// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Statevector simulation and seeded shot sampling.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::hilbert::{scatter, HilbertLabel, SubsystemTag};
use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Seed of a ChaCha8 stream. Child seeds are drawn from the parent stream at
/// a fixed word offset, so a derived seed depends only on (parent, index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub seed: u64,
    pub stream: u64,
}

impl RngSeed {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    /// Independent child seed number `index`.
    pub fn derive(&self, index: u64) -> Self {
        let mut rng = self.rng();
        rng.set_word_pos(2 * index as u128);
        Self::new(rng.next_u64())
    }
}

/// Pure state over a labelled register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    label: HilbertLabel,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(label: HilbertLabel) -> Self {
        let mut amps = alloc::vec![ZERO; label.dim()];
        amps[0] = ONE;
        Self { label, amps }
    }

    pub fn from_amplitudes(label: HilbertLabel, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != label.dim() {
            return Err(Error::DimensionMismatch {
                expected: label.dim(),
                found: amps.len(),
            });
        }
        Ok(Self { label, amps })
    }

    pub fn label(&self) -> &HilbertLabel {
        &self.label
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    fn mask(&self, tag: SubsystemTag) -> Result<usize> {
        Ok(1usize << self.label.bit(tag)?)
    }

    fn apply_single(&mut self, tag: SubsystemTag, u: [[C64; 2]; 2]) -> Result<()> {
        let bit = self.mask(tag)?;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let j = i | bit;
                let (a, b) = (self.amps[i], self.amps[j]);
                self.amps[i] = u[0][0] * a + u[0][1] * b;
                self.amps[j] = u[1][0] * a + u[1][1] * b;
            }
        }
        Ok(())
    }

    /// Applies one gate; measurements are left to the sampler.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match gate {
            Gate::RotationY { target, angle } => {
                let (s, c) = angle.sin_cos();
                let (s, c) = (C64::new(s, 0.0), C64::new(c, 0.0));
                self.apply_single(*target, [[c, -s], [s, c]])
            }
            Gate::Hadamard { target } => {
                let h = C64::new(FRAC_1_SQRT_2, 0.0);
                self.apply_single(*target, [[h, h], [h, -h]])
            }
            Gate::PauliX { target } => {
                let bit = self.mask(*target)?;
                self.flip_where(0, bit);
                Ok(())
            }
            Gate::CNot { control, target } => {
                let cmask = self.mask(*control)?;
                let tmask = self.mask(*target)?;
                self.flip_where(cmask, tmask);
                Ok(())
            }
            Gate::MultiControlledX { controls, targets } => {
                let mut cmask = 0;
                for &c in controls {
                    cmask |= self.mask(c)?;
                }
                let mut tmask = 0;
                for &t in targets {
                    tmask |= self.mask(t)?;
                }
                self.flip_where(cmask, tmask);
                Ok(())
            }
            Gate::ControlledPhase { control, target, phase } => {
                let both = self.mask(*control)? | self.mask(*target)?;
                let (s, c) = phase.sin_cos();
                let factor = C64::new(c, -s);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & both == both {
                        *a *= factor;
                    }
                }
                Ok(())
            }
            Gate::Measure { .. } => Ok(()),
        }
    }

    /// Swaps amplitudes `i ↔ i ^ tmask` on every index with all `cmask` bits set.
    fn flip_where(&mut self, cmask: usize, tmask: usize) {
        for i in 0..self.amps.len() {
            let j = i ^ tmask;
            if i & cmask == cmask && i < j {
                self.amps.swap(i, j);
            }
        }
    }

    /// Born distribution of the `tags` (first tag = most significant bit of
    /// the outcome index).
    pub fn marginal_probabilities(&self, tags: &[SubsystemTag]) -> Result<Vec<f64>> {
        let bits: Vec<usize> = tags.iter().map(|&t| self.label.bit(t)).collect::<Result<_>>()?;
        let k = bits.len();
        let mut probs = alloc::vec![0.0; 1 << k];
        for (i, a) in self.amps.iter().enumerate() {
            let outcome = bits.iter().fold(0usize, |acc, &b| (acc << 1) | ((i >> b) & 1));
            probs[outcome] += a.norm_sqr();
        }
        Ok(probs)
    }

    /// Reduced density matrix over `keep`, in label order.
    pub fn reduced_density(&self, keep: &[SubsystemTag]) -> Result<ComplexMatrix> {
        let kept = self.label.restrict(keep)?;
        let keep_bits: Vec<usize> = kept.tags().iter().map(|&t| self.label.bit(t)).collect::<Result<_>>()?;
        let traced_bits: Vec<usize> = self
            .label
            .tags()
            .iter()
            .filter(|t| !kept.contains(**t))
            .map(|&t| self.label.bit(t))
            .collect::<Result<_>>()?;
        let dk = kept.dim();
        let kept_off: Vec<usize> = (0..dk).map(|k| scatter(k, &keep_bits)).collect();
        let traced_off: Vec<usize> = (0..1usize << traced_bits.len())
            .map(|t| scatter(t, &traced_bits))
            .collect();
        let mut rho = ComplexMatrix::zeros(dk, dk);
        for &t in &traced_off {
            for i in 0..dk {
                let ai = self.amps[kept_off[i] | t];
                if ai == ZERO {
                    continue;
                }
                for j in 0..dk {
                    rho[(i, j)] += ai * self.amps[kept_off[j] | t].conj();
                }
            }
        }
        Ok(rho)
    }
}

/// Exact final state of `circ` from `|0…0⟩` (measurements ignored).
pub fn run_statevector(circ: &Circuit) -> Result<StateVector> {
    let mut psi = StateVector::zero(circ.label().clone());
    for g in circ.gates() {
        psi.apply(g)?;
    }
    Ok(psi)
}

/// Outcome counts over the measured qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    /// Qubits in outcome-string order.
    pub measured: Vec<SubsystemTag>,
    /// Outcome bitstring (one char per measured qubit) → count.
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: RngSeed,
}

fn outcome_string(outcome: usize, width: usize) -> String {
    (0..width)
        .map(|i| {
            if (outcome >> (width - 1 - i)) & 1 == 1 {
                '1'
            } else {
                '0'
            }
        })
        .collect()
}

/// Draws `shots` outcomes from a probability table by inverse-CDF lookup.
pub fn sample_distribution(probs: &[f64], shots: u64, rng: &mut impl RngCore) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let total = acc;
    let mut counts = alloc::vec![0u64; probs.len()];
    // Outcomes of zero probability can never be drawn.
    let last_live = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let k = cdf.partition_point(|&c| c <= u).min(last_live);
        counts[k] += 1;
    }
    Ok(counts)
}

/// Simulates the circuit and samples `shots` measurement records.
pub fn sample_shots(circ: &Circuit, shots: u64, seed: RngSeed) -> Result<ShotRecord> {
    let psi = run_statevector(circ)?;
    let measured = circ.measured();
    let probs = psi.marginal_probabilities(&measured)?;
    sample_from_probabilities(&measured, &probs, shots, seed)
}

/// Samples from an already computed Born table over `measured`.
pub fn sample_from_probabilities(
    measured: &[SubsystemTag],
    probs: &[f64],
    shots: u64,
    seed: RngSeed,
) -> Result<ShotRecord> {
    let mut rng = seed.rng();
    let counts = sample_distribution(probs, shots, &mut rng)?;
    let width = measured.len();
    Ok(ShotRecord {
        measured: measured.to_vec(),
        counts: counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(o, c)| (outcome_string(o, width), c))
            .collect(),
        shots,
        seed,
    })
}

/// Dark/bright tallies on arm a.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PortCounts {
    /// Arm a read as all zeros.
    pub n0: u64,
    /// Arm a read as all ones.
    pub n_n: u64,
}

impl PortCounts {
    pub fn shots(&self) -> u64 {
        self.n0 + self.n_n
    }

    pub fn swapped(self) -> Self {
        Self {
            n0: self.n_n,
            n_n: self.n0,
        }
    }
}

/// Splits a record into the all-zeros and all-ones arm-a outcomes; anything
/// else means the state left the N00N subspace.
pub fn classify_ports(rec: &ShotRecord, arm_a: &[SubsystemTag]) -> Result<PortCounts> {
    let positions: Vec<usize> = arm_a
        .iter()
        .map(|t| {
            rec.measured
                .iter()
                .position(|m| m == t)
                .ok_or_else(|| Error::UnknownTag(alloc::string::ToString::to_string(t)))
        })
        .collect::<Result<_>>()?;
    let mut pc = PortCounts::default();
    for (outcome, &count) in &rec.counts {
        let bytes = outcome.as_bytes();
        let ones = positions.iter().filter(|&&p| bytes[p] == b'1').count();
        if ones == 0 {
            pc.n0 += count;
        } else if ones == positions.len() {
            pc.n_n += count;
        } else {
            return Err(Error::SubspaceLeak {
                outcome: outcome.clone(),
            });
        }
    }
    Ok(pc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{p0_binomial, MziConfig};
    use crate::circuit::{build_thermometry_circuit, build_thermometry_circuit_with, CircuitOptions, NoonInput};

    fn arm_a(n: u16) -> Vec<SubsystemTag> {
        (0..n).map(SubsystemTag::ArmA).collect()
    }

    #[test]
    fn empty_circuit_is_all_zeros() {
        let c = Circuit::new(HilbertLabel::layout(1, 1, 1, 0));
        let psi = run_statevector(&c).unwrap();
        assert_eq!(psi.amplitudes()[0], ONE);
        assert_eq!(psi.norm_sqr(), 1.0);
    }

    #[test]
    fn hadamard_superposition() {
        let mut c = Circuit::new(HilbertLabel::layout(1, 0, 0, 0));
        c.push(Gate::Hadamard {
            target: SubsystemTag::ArmA(0),
        })
        .unwrap();
        let psi = run_statevector(&c).unwrap();
        for a in psi.amplitudes() {
            assert!((a - C64::new(FRAC_1_SQRT_2, 0.0)).norm() < 1e-16);
        }
    }

    #[test]
    fn noon_worked_example_three_photons() {
        // |1⟩ ⊗ |1,1,0,0,0⟩ on (a0; a1 a2 b0 b1 b2).
        let mut c = Circuit::new(HilbertLabel::layout(3, 3, 0, 0));
        for i in 0..3 {
            c.push(Gate::PauliX {
                target: SubsystemTag::ArmA(i),
            })
            .unwrap();
        }
        for g in crate::circuit::noon_splitter(3) {
            c.push(g).unwrap();
        }
        let psi = run_statevector(&c).unwrap();
        let s = FRAC_1_SQRT_2;
        let mut expected = alloc::vec![ZERO; 64];
        expected[0b000111] = C64::new(s, 0.0);
        expected[0b111000] = C64::new(-s, 0.0);
        for (a, e) in psi.amplitudes().iter().zip(&expected) {
            assert!((a - e).norm() < 1e-15);
        }
    }

    #[test]
    fn ancilla_leaves_thermal_marginal() {
        let t = -1.0 / (3.0f64 / 7.0).ln();
        let cfg = MziConfig::new(1, 1.0, 0.0, 1.0, 1).unwrap();
        let circ = build_thermometry_circuit(&cfg, &cfg.ensemble(t).unwrap()).unwrap();
        let mut prep = Circuit::new(circ.label().clone());
        for g in &circ.gates()[..2] {
            prep.push(g.clone()).unwrap();
        }
        let psi = run_statevector(&prep).unwrap();
        let rho = psi.reduced_density(&[SubsystemTag::Sample(0)]).unwrap();
        assert!(rho.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.7, 0.3])) < 1e-15);
    }

    #[test]
    fn born_bright_port_matches_binomial() {
        for (n, m, neff, t) in [(1u32, 1usize, 0.9, 0.5), (2, 3, 2.2, -0.7), (3, 2, 4.1, 3.0)] {
            let cfg = MziConfig::from_neff(neff, 1.0, m)
                .unwrap()
                .with_n(n)
                .unwrap()
                .with_neff(neff)
                .unwrap();
            let circ = build_thermometry_circuit(&cfg, &cfg.ensemble(t).unwrap()).unwrap();
            let probs = run_statevector(&circ)
                .unwrap()
                .marginal_probabilities(&arm_a(n as u16))
                .unwrap();
            let p0 = p0_binomial(&cfg, t).unwrap();
            assert!((probs[0] - p0).abs() < 1e-12, "n={n} m={m}");
            assert!((probs[probs.len() - 1] - (1.0 - p0)).abs() < 1e-12);
        }
    }

    #[test]
    fn minus_noon_swaps_ports() {
        let cfg = MziConfig::from_neff(0.8, 1.0, 2).unwrap();
        let ens = cfg.ensemble(0.6).unwrap();
        let opts = CircuitOptions {
            input: NoonInput::ArmA,
            ..Default::default()
        };
        let circ = build_thermometry_circuit_with(&cfg, &ens, opts).unwrap();
        let probs = run_statevector(&circ)
            .unwrap()
            .marginal_probabilities(&arm_a(1))
            .unwrap();
        assert!((probs[1] - p0_binomial(&cfg, 0.6).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn zero_time_all_bright() {
        let cfg = MziConfig::new(2, 1.0, 0.0, 1.0, 2).unwrap();
        let circ = build_thermometry_circuit(&cfg, &cfg.ensemble(0.8).unwrap()).unwrap();
        let rec = sample_shots(&circ, 1000, RngSeed::new(7)).unwrap();
        let pc = classify_ports(&rec, &arm_a(2)).unwrap();
        assert_eq!(pc, PortCounts { n0: 1000, n_n: 0 });
    }

    #[test]
    fn same_seed_same_record() {
        let cfg = MziConfig::from_neff(0.7, 1.0, 1).unwrap();
        let circ = build_thermometry_circuit(&cfg, &cfg.ensemble(0.5).unwrap()).unwrap();
        let a = sample_shots(&circ, 5000, RngSeed::new(42)).unwrap();
        let b = sample_shots(&circ, 5000, RngSeed::new(42)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 5000);
        let c = sample_shots(&circ, 5000, RngSeed::new(43)).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn zero_shots_rejected() {
        let cfg = MziConfig::from_neff(0.7, 1.0, 1).unwrap();
        let circ = build_thermometry_circuit(&cfg, &cfg.ensemble(0.5).unwrap()).unwrap();
        assert_eq!(sample_shots(&circ, 0, RngSeed::new(1)), Err(Error::ZeroShots));
    }

    #[test]
    fn leak_detected() {
        let mut counts = BTreeMap::new();
        counts.insert(String::from("01"), 3u64);
        let rec = ShotRecord {
            measured: arm_a(2),
            counts,
            shots: 3,
            seed: RngSeed::new(0),
        };
        assert!(matches!(
            classify_ports(&rec, &arm_a(2)),
            Err(Error::SubspaceLeak { .. })
        ));
    }

    #[test]
    fn derived_seeds_are_stable_and_distinct() {
        let root = RngSeed::new(5);
        assert_eq!(root.derive(3), root.derive(3));
        assert_ne!(root.derive(3), root.derive(4));
        assert_ne!(root.derive(3), root.with_stream(1).derive(3));
    }
}
