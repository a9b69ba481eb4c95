// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate-level thermometry circuit.
//!
//! Register layout: arm a as N qubits `a0…a{N-1}`, arm b as N qubits, then M
//! sample qubits and M ancillas. The N00N register follows the MCX–H–MCX
//! recipe with `a0` as the control:
//!
//! ```text
//! |0…0⟩_a |1…1⟩_b  --MCX-->  unchanged  --H(a0)-->  --MCX-->  |0,N⟩ + |N,0⟩
//! ```
//!
//! Within the N00N subspace every arm-a qubit equals `a0`, so the dispersive
//! phase is applied once per sample qubit with `a0` as its target.
//!
//! Text format, one gate per line (`#` starts a comment):
//!
//! ```text
//! qubits a0 b0 s0 x0
//! RY s0 0.7853981633974483
//! CX s0 x0
//! X b0
//! MCX a0 ; b0
//! H a0
//! CP s0 a0 1
//! MEASURE a0
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::analytic::MziConfig;
use crate::error::{invalid, Error, Result};
use crate::hilbert::{HilbertLabel, SubsystemTag};
use crate::thermal::{rotation_angle, ThermalEnsemble};

/// Default qubit budget for [`build_thermometry_circuit`] (a 2^22 statevector).
pub const DEFAULT_MAX_QUBITS: usize = 22;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    /// `[[cos Ω, −sin Ω], [sin Ω, cos Ω]]`.
    RotationY {
        target: SubsystemTag,
        angle: f64,
    },
    Hadamard {
        target: SubsystemTag,
    },
    PauliX {
        target: SubsystemTag,
    },
    CNot {
        control: SubsystemTag,
        target: SubsystemTag,
    },
    /// Flips every target when all controls are |1⟩.
    MultiControlledX {
        controls: Vec<SubsystemTag>,
        targets: Vec<SubsystemTag>,
    },
    /// `diag(1, e^{−iφ})` on the target when the control is |1⟩.
    ControlledPhase {
        control: SubsystemTag,
        target: SubsystemTag,
        phase: f64,
    },
    Measure {
        targets: Vec<SubsystemTag>,
    },
}

impl Gate {
    /// Every qubit the gate touches.
    pub fn qubits(&self) -> Vec<SubsystemTag> {
        match self {
            Gate::RotationY { target, .. } | Gate::Hadamard { target } | Gate::PauliX { target } => {
                alloc::vec![*target]
            }
            Gate::CNot { control, target } | Gate::ControlledPhase { control, target, .. } => {
                alloc::vec![*control, *target]
            }
            Gate::MultiControlledX { controls, targets } => controls.iter().chain(targets).copied().collect(),
            Gate::Measure { targets } => targets.clone(),
        }
    }

    fn mnemonic(&self) -> &'static str {
        match self {
            Gate::RotationY { .. } => "RY",
            Gate::Hadamard { .. } => "H",
            Gate::PauliX { .. } => "X",
            Gate::CNot { .. } => "CX",
            Gate::MultiControlledX { .. } => "MCX",
            Gate::ControlledPhase { .. } => "CP",
            Gate::Measure { .. } => "MEASURE",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // f64 Display is the shortest string that parses back to the same bits.
        f.write_str(self.mnemonic())?;
        match self {
            Gate::RotationY { target, angle } => write!(f, " {target} {angle}"),
            Gate::Hadamard { target } | Gate::PauliX { target } => write!(f, " {target}"),
            Gate::CNot { control, target } => write!(f, " {control} {target}"),
            Gate::MultiControlledX { controls, targets } => {
                for c in controls {
                    write!(f, " {c}")?;
                }
                f.write_str(" ;")?;
                for t in targets {
                    write!(f, " {t}")?;
                }
                Ok(())
            }
            Gate::ControlledPhase { control, target, phase } => write!(f, " {control} {target} {phase}"),
            Gate::Measure { targets } => {
                for t in targets {
                    write!(f, " {t}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    label: HilbertLabel,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(label: HilbertLabel) -> Self {
        Self {
            label,
            gates: Vec::new(),
        }
    }

    pub fn label(&self) -> &HilbertLabel {
        &self.label
    }

    pub fn qubit_count(&self) -> usize {
        self.label.num_qubits()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    /// Appends a gate after checking that its qubits exist and are distinct,
    /// and that nothing but measurements follows a measurement.
    pub fn push(&mut self, gate: Gate) -> Result<()> {
        let qubits = gate.qubits();
        if qubits.is_empty() {
            return Err(invalid("gate", alloc::format!("{} acts on no qubits", gate.mnemonic())));
        }
        for (i, q) in qubits.iter().enumerate() {
            self.label.position(*q)?;
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateTag(q.to_string()));
            }
        }
        if !matches!(gate, Gate::Measure { .. }) && self.gates.iter().any(|g| matches!(g, Gate::Measure { .. })) {
            return Err(invalid("gate", "measurements must come last"));
        }
        if let Gate::RotationY { angle, .. } | Gate::ControlledPhase { phase: angle, .. } = gate {
            if !angle.is_finite() {
                return Err(invalid("angle", "must be finite"));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Measured qubits in measurement order, or every qubit if the circuit
    /// has no measurement.
    pub fn measured(&self) -> Vec<SubsystemTag> {
        let m: Vec<SubsystemTag> = self
            .gates
            .iter()
            .filter_map(|g| match g {
                Gate::Measure { targets } => Some(targets.iter().copied()),
                _ => None,
            })
            .flatten()
            .collect();
        if m.is_empty() {
            self.label.tags().to_vec()
        } else {
            m
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |reason: String| Error::Parse { line: line_no, reason };
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            let rest: Vec<&str> = words.collect();
            match circuit.as_mut() {
                None => {
                    if head != "qubits" {
                        return Err(parse_err("expected a `qubits` header".into()));
                    }
                    let tags = parse_tags(&rest).map_err(|e| parse_err(e.to_string()))?;
                    let label = HilbertLabel::new(tags).map_err(|e| parse_err(e.to_string()))?;
                    circuit = Some(Circuit::new(label));
                }
                Some(c) => {
                    let gate = parse_gate(head, &rest).map_err(parse_err)?;
                    c.push(gate).map_err(|e| parse_err(e.to_string()))?;
                }
            }
        }
        circuit.ok_or(Error::Parse {
            line: 0,
            reason: "empty circuit text".into(),
        })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("qubits")?;
        for t in self.label.tags() {
            write!(f, " {t}")?;
        }
        writeln!(f)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

fn parse_tags(words: &[&str]) -> Result<Vec<SubsystemTag>> {
    words.iter().map(|w| w.parse()).collect()
}

fn parse_gate(head: &str, args: &[&str]) -> core::result::Result<Gate, String> {
    let tag = |i: usize| -> core::result::Result<SubsystemTag, String> {
        args.get(i)
            .ok_or_else(|| alloc::format!("{head}: missing operand {}", i + 1))?
            .parse()
            .map_err(|e: Error| e.to_string())
    };
    let num = |i: usize| -> core::result::Result<f64, String> {
        let s = args.get(i).ok_or_else(|| alloc::format!("{head}: missing parameter"))?;
        s.parse().map_err(|_| alloc::format!("{head}: bad number `{s}`"))
    };
    let arity = |n: usize| {
        if args.len() == n {
            Ok(())
        } else {
            Err(alloc::format!("{head}: expected {n} operands, found {}", args.len()))
        }
    };
    match head {
        "RY" => {
            arity(2)?;
            Ok(Gate::RotationY {
                target: tag(0)?,
                angle: num(1)?,
            })
        }
        "H" => {
            arity(1)?;
            Ok(Gate::Hadamard { target: tag(0)? })
        }
        "X" => {
            arity(1)?;
            Ok(Gate::PauliX { target: tag(0)? })
        }
        "CX" => {
            arity(2)?;
            Ok(Gate::CNot {
                control: tag(0)?,
                target: tag(1)?,
            })
        }
        "CP" => {
            arity(3)?;
            Ok(Gate::ControlledPhase {
                control: tag(0)?,
                target: tag(1)?,
                phase: num(2)?,
            })
        }
        "MCX" => {
            let split = args
                .iter()
                .position(|&w| w == ";")
                .ok_or_else(|| "MCX: missing `;` between controls and targets".to_string())?;
            let controls = parse_tags(&args[..split]).map_err(|e| e.to_string())?;
            let targets = parse_tags(&args[split + 1..]).map_err(|e| e.to_string())?;
            Ok(Gate::MultiControlledX { controls, targets })
        }
        "MEASURE" => Ok(Gate::Measure {
            targets: parse_tags(args).map_err(|e| e.to_string())?,
        }),
        other => Err(alloc::format!("unknown gate `{other}`")),
    }
}

/// Which arm carries the photons entering the first beam splitter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoonInput {
    /// `|0,N⟩` in: the splitter yields `(|0,N⟩ + |N,0⟩)/√2` and the bright
    /// port reads arm a as all zeros.
    #[default]
    ArmB,
    /// `|N,0⟩` in: the splitter yields `(|0,N⟩ − |N,0⟩)/√2` and the ports
    /// swap, so the bright port reads arm a as all ones.
    ArmA,
}

impl NoonInput {
    /// Whether the bright port is the all-zeros arm-a outcome.
    pub fn bright_is_all_zeros(self) -> bool {
        matches!(self, NoonInput::ArmB)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitOptions {
    pub input: NoonInput,
    pub max_qubits: usize,
}

impl Default for CircuitOptions {
    fn default() -> Self {
        Self {
            input: NoonInput::ArmB,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

/// MCX(a0 → rest) · H(a0) · MCX(a0 → rest), the N00N beam splitter.
pub fn noon_splitter(n: usize) -> Vec<Gate> {
    let control = SubsystemTag::ArmA(0);
    let targets: Vec<SubsystemTag> = (1..n as u16)
        .map(SubsystemTag::ArmA)
        .chain((0..n as u16).map(SubsystemTag::ArmB))
        .collect();
    let mcx = Gate::MultiControlledX {
        controls: alloc::vec![control],
        targets,
    };
    alloc::vec![mcx.clone(), Gate::Hadamard { target: control }, mcx]
}

pub fn build_thermometry_circuit(cfg: &MziConfig, ens: &ThermalEnsemble) -> Result<Circuit> {
    build_thermometry_circuit_with(cfg, ens, CircuitOptions::default())
}

/// Gibbs preparation, N00N preparation, dispersive interaction, second beam
/// splitter, arm-a measurement.
pub fn build_thermometry_circuit_with(
    cfg: &MziConfig,
    ens: &ThermalEnsemble,
    options: CircuitOptions,
) -> Result<Circuit> {
    if ens.m() != cfg.m() {
        return Err(invalid(
            "ensemble",
            alloc::format!("sample has M = {} but the interferometer expects {}", ens.m(), cfg.m()),
        ));
    }
    let n = cfg.n() as usize;
    let m = cfg.m();
    let qubits = 2 * n + 2 * m;
    if qubits > options.max_qubits {
        return Err(Error::CapExceeded {
            what: "qubits",
            requested: qubits,
            cap: options.max_qubits,
        });
    }
    if n > u16::MAX as usize || m > u16::MAX as usize {
        return Err(invalid("register", "too many qubits to label"));
    }
    let mut c = Circuit::new(HilbertLabel::layout(n, n, m, m));

    // Thermal sample, purified by one ancilla per atom.
    let omega = rotation_angle(ens);
    for k in 0..m as u16 {
        c.push(Gate::RotationY {
            target: SubsystemTag::Sample(k),
            angle: omega,
        })?;
        c.push(Gate::CNot {
            control: SubsystemTag::Sample(k),
            target: SubsystemTag::Ancilla(k),
        })?;
    }

    // Photon input.
    for i in 0..n as u16 {
        let target = match options.input {
            NoonInput::ArmB => SubsystemTag::ArmB(i),
            NoonInput::ArmA => SubsystemTag::ArmA(i),
        };
        c.push(Gate::PauliX { target })?;
    }

    let splitter = noon_splitter(n);
    for g in &splitter {
        c.push(g.clone())?;
    }

    let phase = cfg.phase_per_excitation();
    for k in 0..m as u16 {
        c.push(Gate::ControlledPhase {
            control: SubsystemTag::Sample(k),
            target: SubsystemTag::ArmA(0),
            phase,
        })?;
    }

    // Inverse of the splitter; every gate is self-inverse.
    for g in splitter.iter().rev() {
        c.push(g.clone())?;
    }

    c.push(Gate::Measure {
        targets: (0..n as u16).map(SubsystemTag::ArmA).collect(),
    })?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_circuit() -> Circuit {
        let cfg = MziConfig::new(2, 0.3, 1.7, 1.0, 2).unwrap();
        let ens = cfg.ensemble(0.37).unwrap();
        build_thermometry_circuit(&cfg, &ens).unwrap()
    }

    #[test]
    fn layout_and_gate_count() {
        let c = sample_circuit();
        assert_eq!(c.qubit_count(), 8);
        // 2 RY + 2 CX + 2 X + 3 splitter + 2 CP + 3 splitter + 1 MEASURE.
        assert_eq!(c.gates().len(), 15);
        assert_eq!(c.measured(), alloc::vec![SubsystemTag::ArmA(0), SubsystemTag::ArmA(1)]);
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let c = sample_circuit();
        let text = c.to_text();
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_text(), text);
        for (a, b) in c.gates().iter().zip(back.gates()) {
            if let (Gate::RotationY { angle: x, .. }, Gate::RotationY { angle: y, .. }) = (a, b) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = Circuit::from_text("qubits a0 b0\nH a0\nFOO a0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = Circuit::from_text("H a0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = Circuit::from_text("qubits a0\nH a1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn measurement_must_be_last() {
        let mut c = Circuit::new(HilbertLabel::layout(1, 1, 0, 0));
        c.push(Gate::Measure {
            targets: alloc::vec![SubsystemTag::ArmA(0)],
        })
        .unwrap();
        assert!(c
            .push(Gate::Hadamard {
                target: SubsystemTag::ArmA(0)
            })
            .is_err());
    }

    #[test]
    fn rejects_repeated_qubit_in_gate() {
        let mut c = Circuit::new(HilbertLabel::layout(1, 1, 0, 0));
        let g = Gate::CNot {
            control: SubsystemTag::ArmA(0),
            target: SubsystemTag::ArmA(0),
        };
        assert!(matches!(c.push(g), Err(Error::DuplicateTag(_))));
    }

    #[test]
    fn qubit_budget_enforced() {
        let cfg = MziConfig::new(3, 1.0, 1.0, 1.0, 9).unwrap();
        let ens = cfg.ensemble(1.0).unwrap();
        assert!(matches!(
            build_thermometry_circuit(&cfg, &ens),
            Err(Error::CapExceeded { requested: 24, .. })
        ));
    }

    #[test]
    fn single_photon_splitter_is_cnot_h_cnot() {
        let gates = noon_splitter(1);
        assert_eq!(
            gates[0],
            Gate::MultiControlledX {
                controls: alloc::vec![SubsystemTag::ArmA(0)],
                targets: alloc::vec![SubsystemTag::ArmB(0)],
            }
        );
        assert_eq!(
            gates[1],
            Gate::Hadamard {
                target: SubsystemTag::ArmA(0)
            }
        );
    }
}
