// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Time-resolved circuit representation on the integer `dt` grid.
//!
//! A [`Circuit`] is an ordered instruction list over a declared register.
//! Scheduling assigns every instruction an integer start time and produces a
//! [`ScheduledCircuit`]; per qubit, program order is preserved and intervals
//! never overlap.

mod schedule;
mod text;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::device::{DeviceModel, QubitId};
use crate::linalg::{self, CMat};

pub use schedule::{find_idle_windows, schedule_alap, schedule_asap, IdleWindow};
pub use text::{emit_text, parse_text, ParsedCircuit};

#[derive(Debug, Error, PartialEq)]
pub enum CircuitError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("instruction {index} ({gate}): {reason}")]
    Invalid {
        index: usize,
        gate: String,
        reason: String,
    },
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("circuit is not scheduled: instruction {0} has no start time")]
    Unscheduled(usize),
    #[error("qubit {qubit}: instructions {first} and {second} overlap in time")]
    Overlap {
        qubit: QubitId,
        first: usize,
        second: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    /// +π about x.
    Xp,
    /// −π about x, negative pulse amplitude.
    Xm,
    Yp,
    Ym,
    SX,
    /// Virtual Z rotation, angle in radians.
    RZ(f64),
    H,
    /// Control is the first qubit.
    CX,
    Barrier,
    Delay(u64),
    /// Arbitrary one- or two-qubit unitary.
    Unitary(CMat),
    Measure,
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Xp => "xp",
            GateKind::Xm => "xm",
            GateKind::Yp => "yp",
            GateKind::Ym => "ym",
            GateKind::SX => "sx",
            GateKind::RZ(_) => "rz",
            GateKind::H => "h",
            GateKind::CX => "cx",
            GateKind::Barrier => "barrier",
            GateKind::Delay(_) => "delay",
            GateKind::Unitary(_) => "unitary",
            GateKind::Measure => "measure",
        }
    }

    /// Number of qubits the gate acts on, `None` for variadic barriers.
    pub fn arity(&self) -> Option<usize> {
        match self {
            GateKind::CX => Some(2),
            GateKind::Barrier => None,
            GateKind::Unitary(m) => Some(m.nrows().trailing_zeros() as usize),
            _ => Some(1),
        }
    }

    /// Ideal unitary of a physical gate; `None` for delays, barriers and
    /// measurement.
    pub fn matrix(&self) -> Option<CMat> {
        use std::f64::consts::PI;
        Some(match self {
            GateKind::Xp => linalg::rx(PI),
            GateKind::Xm => linalg::rx(-PI),
            GateKind::Yp => linalg::ry(PI),
            GateKind::Ym => linalg::ry(-PI),
            GateKind::SX => linalg::sx(),
            GateKind::RZ(theta) => linalg::rz(*theta),
            GateKind::H => linalg::hadamard(),
            GateKind::CX => linalg::cx(),
            GateKind::Unitary(m) => m.clone(),
            GateKind::Barrier | GateKind::Delay(_) | GateKind::Measure => return None,
        })
    }

    pub fn is_dd_pulse(&self) -> bool {
        matches!(self, GateKind::Xp | GateKind::Xm | GateKind::Yp | GateKind::Ym)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::RZ(a) => write!(f, "rz({a})"),
            GateKind::Delay(d) => write!(f, "delay({d})"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instruction {
    pub kind: GateKind,
    pub qubits: Vec<QubitId>,
    /// Start time in dt; `None` until scheduled.
    pub start: Option<u64>,
    /// Explicit duration in dt; when `None` it is resolved from the device.
    pub duration: Option<u64>,
}

impl Instruction {
    pub fn new(kind: GateKind, qubits: Vec<QubitId>) -> Self {
        Instruction {
            kind,
            qubits,
            start: None,
            duration: None,
        }
    }

    pub fn with_duration(mut self, duration: u64) -> Self {
        self.duration = Some(duration);
        self
    }

    pub fn end(&self) -> Option<u64> {
        Some(self.start? + self.duration?)
    }
}

/// Duration of `kind` on `qubits` according to the device calibration.
pub fn resolve_duration(kind: &GateKind, qubits: &[QubitId], device: &DeviceModel) -> Result<u64, CircuitError> {
    let sx_of = |q: QubitId| {
        device
            .qubit(q)
            .map(|p| p.sx_duration)
            .ok_or_else(|| CircuitError::Config(format!("qubit {q} is not in the device")))
    };
    let x_of = |q: QubitId| {
        device
            .qubit(q)
            .map(|p| p.x_duration)
            .ok_or_else(|| CircuitError::Config(format!("qubit {q} is not in the device")))
    };
    let cx_of = |a: QubitId, b: QubitId| -> Result<u64, CircuitError> {
        let c = device
            .coupling(a, b)
            .ok_or_else(|| CircuitError::Config(format!("no CX calibration for qubits ({a}, {b})")))?;
        if c.control == a {
            Ok(c.cx_duration)
        } else {
            // reversed direction: Hadamard layers on both sides
            Ok(c.cx_duration + 2 * sx_of(a)?.max(sx_of(b)?))
        }
    };
    match kind {
        GateKind::Xp | GateKind::Xm | GateKind::Yp | GateKind::Ym => x_of(qubits[0]),
        GateKind::SX | GateKind::H => sx_of(qubits[0]),
        GateKind::RZ(_) | GateKind::Barrier | GateKind::Measure => Ok(0),
        GateKind::Delay(d) => Ok(*d),
        GateKind::CX => cx_of(qubits[0], qubits[1]),
        GateKind::Unitary(_) => match qubits {
            [q] => Ok(2 * sx_of(*q)?),
            [a, b] => {
                let c = device
                    .coupling(*a, *b)
                    .ok_or_else(|| CircuitError::Config(format!("no CX calibration for qubits ({a}, {b})")))?;
                Ok(su4_block_duration(c.cx_duration, sx_of(*a)?.max(sx_of(*b)?)))
            }
            _ => Err(CircuitError::Config("unitaries act on one or two qubits".into())),
        },
    }
}

/// Cost model for a generic two-qubit unitary: three CX and four SX layers.
pub fn su4_block_duration(cx_duration: u64, sx_duration: u64) -> u64 {
    3 * cx_duration + 4 * sx_duration
}

/// Unscheduled program over an ordered register. Register position 0 is the
/// most significant bit of simulator basis indices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub qubits: Vec<QubitId>,
    pub instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(qubits: Vec<QubitId>) -> Self {
        Circuit {
            qubits,
            instructions: Vec::new(),
        }
    }

    pub fn push(&mut self, inst: Instruction) -> &mut Self {
        self.instructions.push(inst);
        self
    }

    pub fn gate(&mut self, kind: GateKind, qubits: &[QubitId]) -> &mut Self {
        self.push(Instruction::new(kind, qubits.to_vec()))
    }

    /// One delay instruction per listed qubit.
    pub fn delay(&mut self, qubits: &[QubitId], duration: u64) -> &mut Self {
        for &q in qubits {
            self.push(Instruction::new(GateKind::Delay(duration), vec![q]).with_duration(duration));
        }
        self
    }

    pub fn barrier(&mut self, qubits: &[QubitId]) -> &mut Self {
        self.gate(GateKind::Barrier, qubits)
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let register: HashSet<QubitId> = self.qubits.iter().copied().collect();
        if register.len() != self.qubits.len() {
            return Err(CircuitError::Config("register lists a qubit twice".into()));
        }
        let mut measured = HashSet::new();
        for (index, inst) in self.instructions.iter().enumerate() {
            let fail = |reason: String| CircuitError::Invalid {
                index,
                gate: inst.kind.to_string(),
                reason,
            };
            if inst.qubits.is_empty() {
                return Err(fail("no qubits".into()));
            }
            let distinct: HashSet<_> = inst.qubits.iter().collect();
            if distinct.len() != inst.qubits.len() {
                return Err(fail("qubits must be distinct".into()));
            }
            if let Some(q) = inst.qubits.iter().find(|q| !register.contains(q)) {
                return Err(fail(format!("qubit {q} is not in the register")));
            }
            if let Some(n) = inst.kind.arity() {
                if inst.qubits.len() != n {
                    return Err(fail(format!("expects {n} qubit(s), got {}", inst.qubits.len())));
                }
            }
            match &inst.kind {
                GateKind::Unitary(m) => {
                    if !(m.nrows() == 2 || m.nrows() == 4) || !m.is_square() {
                        return Err(fail("unitary must be 2×2 or 4×4".into()));
                    }
                    if !linalg::is_unitary(m, 1e-10) {
                        return Err(fail("matrix is not unitary within 1e-10".into()));
                    }
                }
                GateKind::RZ(a) if !a.is_finite() => return Err(fail("angle must be finite".into())),
                _ => {}
            }
            if let (Some(d), GateKind::RZ(_) | GateKind::Barrier) = (inst.duration, &inst.kind) {
                if d != 0 {
                    return Err(fail("rz and barrier take no time".into()));
                }
            }
            if let (Some(d), GateKind::Delay(n)) = (inst.duration, &inst.kind) {
                if d != *n {
                    return Err(fail("delay duration disagrees with its argument".into()));
                }
            }
            if let Some(q) = inst.qubits.iter().find(|q| measured.contains(*q)) {
                return Err(fail(format!("qubit {q} was already measured; mid-circuit measurement is not supported")));
            }
            if inst.kind == GateKind::Measure {
                measured.insert(inst.qubits[0]);
            }
        }
        Ok(())
    }
}

/// Circuit whose instructions all carry start times and durations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledCircuit {
    qubits: Vec<QubitId>,
    instructions: Vec<Instruction>,
    total_duration: u64,
}

impl ScheduledCircuit {
    /// Build from timed instructions, checking that every start and duration
    /// is set and that per-qubit intervals are disjoint and in program order.
    pub fn from_parts(qubits: Vec<QubitId>, instructions: Vec<Instruction>) -> Result<Self, CircuitError> {
        let circuit = Circuit {
            qubits,
            instructions,
        };
        circuit.validate()?;
        let mut total = 0;
        let mut last: Vec<Option<(usize, u64)>> = vec![None; circuit.qubits.len()];
        for (i, inst) in circuit.instructions.iter().enumerate() {
            let start = inst.start.ok_or(CircuitError::Unscheduled(i))?;
            let dur = inst.duration.ok_or(CircuitError::Unscheduled(i))?;
            for q in &inst.qubits {
                let pos = circuit.qubits.iter().position(|r| r == q).expect("validated");
                if let Some((prev, end)) = last[pos] {
                    if start < end {
                        return Err(CircuitError::Overlap {
                            qubit: *q,
                            first: prev,
                            second: i,
                        });
                    }
                }
                last[pos] = Some((i, start + dur));
            }
            total = total.max(start + dur);
        }
        Ok(ScheduledCircuit {
            qubits: circuit.qubits,
            instructions: circuit.instructions,
            total_duration: total,
        })
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn total_duration(&self) -> u64 {
        self.total_duration
    }

    /// Register position of a qubit id.
    pub fn position(&self, qubit: QubitId) -> Option<usize> {
        self.qubits.iter().position(|&q| q == qubit)
    }

    /// Unscheduled copy with resolved durations pinned as explicit overrides.
    pub fn to_circuit(&self) -> Circuit {
        Circuit {
            qubits: self.qubits.clone(),
            instructions: self
                .instructions
                .iter()
                .map(|i| Instruction {
                    start: None,
                    ..i.clone()
                })
                .collect(),
        }
    }

    /// Instructions that act on `qubit`, in program order, with indices.
    pub fn on_qubit(&self, qubit: QubitId) -> impl Iterator<Item = (usize, &Instruction)> {
        self.instructions
            .iter()
            .enumerate()
            .filter(move |(_, i)| i.qubits.contains(&qubit))
    }
}
