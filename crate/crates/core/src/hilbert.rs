// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Labeled tensor-product layouts of qubit registers.
//!
//! Subsystems are always ordered arm-a, arm-b, sample, ancilla, and the
//! first tag of a label is the most significant bit of a basis index. The
//! density-matrix oracle and the circuit simulator both address qubits only
//! through these tags.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};

/// One two-level subsystem. The derived ordering is the canonical layout order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SubsystemTag {
    ArmA(u16),
    ArmB(u16),
    Sample(u16),
    Ancilla(u16),
}

impl fmt::Display for SubsystemTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubsystemTag::ArmA(i) => write!(f, "a{i}"),
            SubsystemTag::ArmB(i) => write!(f, "b{i}"),
            SubsystemTag::Sample(i) => write!(f, "s{i}"),
            SubsystemTag::Ancilla(i) => write!(f, "x{i}"),
        }
    }
}

impl core::str::FromStr for SubsystemTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownTag(s.to_string());
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(unknown)?;
        let index: u16 = chars.as_str().parse().map_err(|_| unknown())?;
        match kind {
            'a' => Ok(SubsystemTag::ArmA(index)),
            'b' => Ok(SubsystemTag::ArmB(index)),
            's' => Ok(SubsystemTag::Sample(index)),
            'x' => Ok(SubsystemTag::Ancilla(index)),
            _ => Err(unknown()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertLabel {
    tags: Vec<SubsystemTag>,
}

impl HilbertLabel {
    /// Tags must be unique and listed in canonical order.
    pub fn new(tags: Vec<SubsystemTag>) -> Result<Self> {
        for w in tags.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateTag(w[0].to_string()));
            }
            if w[0] > w[1] {
                return Err(Error::InvalidParameter {
                    name: "label",
                    reason: alloc::format!("tag {} listed after {}", w[1], w[0]),
                });
            }
        }
        Ok(Self { tags })
    }

    /// Canonical layout with the given register sizes.
    pub fn layout(arm_a: usize, arm_b: usize, sample: usize, ancilla: usize) -> Self {
        let mut tags = Vec::with_capacity(arm_a + arm_b + sample + ancilla);
        tags.extend((0..arm_a).map(|i| SubsystemTag::ArmA(i as u16)));
        tags.extend((0..arm_b).map(|i| SubsystemTag::ArmB(i as u16)));
        tags.extend((0..sample).map(|i| SubsystemTag::Sample(i as u16)));
        tags.extend((0..ancilla).map(|i| SubsystemTag::Ancilla(i as u16)));
        Self { tags }
    }

    #[inline]
    pub fn tags(&self) -> &[SubsystemTag] {
        &self.tags
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.tags.len()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1usize << self.tags.len()
    }

    pub fn position(&self, tag: SubsystemTag) -> Result<usize> {
        self.tags
            .iter()
            .position(|&t| t == tag)
            .ok_or_else(|| Error::UnknownTag(tag.to_string()))
    }

    pub fn contains(&self, tag: SubsystemTag) -> bool {
        self.tags.contains(&tag)
    }

    /// Bit of a basis index that carries `tag`.
    pub fn bit(&self, tag: SubsystemTag) -> Result<usize> {
        Ok(self.tags.len() - 1 - self.position(tag)?)
    }

    /// Sub-label made of the `keep` tags, in this label's order.
    pub fn restrict(&self, keep: &[SubsystemTag]) -> Result<Self> {
        for &k in keep {
            self.position(k)?;
        }
        Ok(Self {
            tags: self.tags.iter().copied().filter(|t| keep.contains(t)).collect(),
        })
    }

    pub fn tags_where(&self, pred: impl Fn(&SubsystemTag) -> bool) -> Vec<SubsystemTag> {
        self.tags.iter().copied().filter(|t| pred(t)).collect()
    }
}

/// Scatters the bits of `value` onto the given bit positions (LSB of
/// `value` goes to the last position).
#[inline]
pub(crate) fn scatter(value: usize, positions: &[usize]) -> usize {
    let n = positions.len();
    positions
        .iter()
        .enumerate()
        .fold(0usize, |acc, (i, &p)| acc | (((value >> (n - 1 - i)) & 1) << p))
}

/// Reduced density matrix over `keep`. The kept subsystems appear in the
/// order they have in `label`.
pub fn partial_trace(rho: &ComplexMatrix, label: &HilbertLabel, keep: &[SubsystemTag]) -> Result<ComplexMatrix> {
    if !rho.is_square() || rho.rows() != label.dim() {
        return Err(Error::DimensionMismatch {
            expected: label.dim(),
            found: rho.rows(),
        });
    }
    let kept = label.restrict(keep)?;
    let keep_bits: Vec<usize> = kept.tags().iter().map(|&t| label.bit(t)).collect::<Result<_>>()?;
    let traced_bits: Vec<usize> = label
        .tags()
        .iter()
        .filter(|t| !kept.contains(**t))
        .map(|&t| label.bit(t))
        .collect::<Result<_>>()?;

    let dk = kept.dim();
    let dt = 1usize << traced_bits.len();
    let traced_offsets: Vec<usize> = (0..dt).map(|t| scatter(t, &traced_bits)).collect();
    let kept_offsets: Vec<usize> = (0..dk).map(|k| scatter(k, &keep_bits)).collect();

    let mut out = ComplexMatrix::zeros(dk, dk);
    for i in 0..dk {
        for j in 0..dk {
            let mut acc = ZERO;
            for &t in &traced_offsets {
                acc += rho[(kept_offsets[i] | t, kept_offsets[j] | t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{kron, C64};

    #[test]
    fn layout_is_canonical() {
        let l = HilbertLabel::layout(2, 1, 2, 2);
        assert_eq!(l.num_qubits(), 7);
        assert_eq!(l.dim(), 128);
        assert_eq!(l.bit(SubsystemTag::ArmA(0)).unwrap(), 6);
        assert_eq!(l.bit(SubsystemTag::Ancilla(1)).unwrap(), 0);
        assert!(HilbertLabel::new(l.tags().to_vec()).is_ok());
    }

    #[test]
    fn rejects_duplicates_and_disorder() {
        use SubsystemTag::*;
        assert!(matches!(
            HilbertLabel::new(alloc::vec![ArmA(0), ArmA(0)]),
            Err(Error::DuplicateTag(_))
        ));
        assert!(HilbertLabel::new(alloc::vec![Sample(0), ArmA(0)]).is_err());
    }

    #[test]
    fn tag_text_round_trip() {
        use SubsystemTag::*;
        for t in [ArmA(3), ArmB(0), Sample(12), Ancilla(7)] {
            assert_eq!(t.to_string().parse::<SubsystemTag>().unwrap(), t);
        }
        assert!("q1".parse::<SubsystemTag>().is_err());
    }

    #[test]
    fn trace_out_product_factor() {
        use SubsystemTag::*;
        let rho_a = ComplexMatrix::from_vec(
            2,
            2,
            alloc::vec![
                C64::new(0.7, 0.0),
                C64::new(0.1, 0.2),
                C64::new(0.1, -0.2),
                C64::new(0.3, 0.0)
            ],
        )
        .unwrap();
        let rho_b = ComplexMatrix::from_real_diagonal(&[0.25, 0.75]);
        let label = HilbertLabel::layout(1, 1, 0, 0);
        let joint = kron(&rho_a, &rho_b);
        let ra = partial_trace(&joint, &label, &[ArmA(0)]).unwrap();
        assert!(ra.max_abs_diff(&rho_a) < 1e-15);
        let rb = partial_trace(&joint, &label, &[ArmB(0)]).unwrap();
        assert!(rb.max_abs_diff(&rho_b) < 1e-15);
    }

    #[test]
    fn bell_state_marginal_is_maximally_mixed() {
        let s = 1.0 / 2.0f64.sqrt();
        let psi = [C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)];
        let rho = ComplexMatrix::outer(&psi, &psi);
        let label = HilbertLabel::layout(1, 1, 0, 0);
        let r = partial_trace(&rho, &label, &[SubsystemTag::ArmA(0)]).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_real_diagonal(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let label = HilbertLabel::layout(1, 1, 0, 0);
        let rho = ComplexMatrix::identity(8);
        assert!(matches!(
            partial_trace(&rho, &label, &[SubsystemTag::ArmA(0)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
