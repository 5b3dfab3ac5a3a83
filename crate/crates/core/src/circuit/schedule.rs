// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use crate::device::{DeviceModel, QubitId};

use super::{resolve_duration, Circuit, CircuitError, GateKind, Instruction, ScheduledCircuit};

fn durations(circuit: &Circuit, device: &DeviceModel) -> Result<Vec<u64>, CircuitError> {
    circuit
        .instructions
        .iter()
        .map(|inst| match inst.duration {
            Some(d) => Ok(d),
            None => resolve_duration(&inst.kind, &inst.qubits, device),
        })
        .collect()
}

fn positions(circuit: &Circuit, inst: &Instruction) -> Vec<usize> {
    inst.qubits
        .iter()
        .map(|q| circuit.qubits.iter().position(|r| r == q).expect("validated"))
        .collect()
}

/// Schedule every instruction as late as its successors allow.
///
/// Works backwards from the end of the program: each qubit tracks how much
/// time is already committed after it, an instruction lands immediately
/// before the latest commitment among its qubits, and barriers align their
/// qubits. All qubits finish at `total_duration`.
pub fn schedule_alap(circuit: &Circuit, device: &DeviceModel) -> Result<ScheduledCircuit, CircuitError> {
    circuit.validate()?;
    let durs = durations(circuit, device)?;
    let mut tail = vec![0u64; circuit.qubits.len()];
    let mut from_end = vec![0u64; circuit.instructions.len()];
    for (i, inst) in circuit.instructions.iter().enumerate().rev() {
        let pos = positions(circuit, inst);
        let reversed_start = pos.iter().map(|&p| tail[p]).max().unwrap_or(0);
        let reversed_end = reversed_start + durs[i];
        for p in pos {
            tail[p] = reversed_end;
        }
        from_end[i] = reversed_end;
    }
    let total = tail.iter().copied().max().unwrap_or(0);
    let instructions = circuit
        .instructions
        .iter()
        .zip(durs)
        .zip(from_end)
        .map(|((inst, d), e)| Instruction {
            start: Some(total - e),
            duration: Some(d),
            ..inst.clone()
        })
        .collect();
    ScheduledCircuit::from_parts(circuit.qubits.clone(), instructions)
}

/// Schedule every instruction as early as its predecessors allow.
pub fn schedule_asap(circuit: &Circuit, device: &DeviceModel) -> Result<ScheduledCircuit, CircuitError> {
    circuit.validate()?;
    let durs = durations(circuit, device)?;
    let mut head = vec![0u64; circuit.qubits.len()];
    let mut instructions = Vec::with_capacity(circuit.instructions.len());
    for (inst, d) in circuit.instructions.iter().zip(durs) {
        let pos = positions(circuit, inst);
        let start = pos.iter().map(|&p| head[p]).max().unwrap_or(0);
        for p in pos {
            head[p] = start + d;
        }
        instructions.push(Instruction {
            start: Some(start),
            duration: Some(d),
            ..inst.clone()
        });
    }
    ScheduledCircuit::from_parts(circuit.qubits.clone(), instructions)
}

/// Maximal interior stretch of time in which a qubit runs no instruction
/// other than explicit delays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct IdleWindow {
    pub qubit: QubitId,
    pub start: u64,
    pub duration: u64,
}

impl IdleWindow {
    pub fn end(&self) -> u64 {
        self.start + self.duration
    }
}

/// Interior idle windows of every qubit, ordered by register position and
/// then by start time.
///
/// Delays count as idle time; every other instruction (barriers and
/// zero-length virtual gates included) bounds a window. Time before a
/// qubit's first instruction and after its last is not reported.
pub fn find_idle_windows(circuit: &ScheduledCircuit) -> Vec<IdleWindow> {
    let mut windows = Vec::new();
    for &q in circuit.qubits() {
        let mut busy: Vec<(u64, u64)> = circuit
            .on_qubit(q)
            .filter(|(_, i)| !matches!(i.kind, GateKind::Delay(_)))
            .map(|(_, i)| {
                let s = i.start.expect("scheduled");
                (s, s + i.duration.expect("scheduled"))
            })
            .collect();
        busy.sort();
        for pair in busy.windows(2) {
            let (_, prev_end) = pair[0];
            let (next_start, _) = pair[1];
            if next_start > prev_end {
                windows.push(IdleWindow {
                    qubit: q,
                    start: prev_end,
                    duration: next_start - prev_end,
                });
            }
        }
    }
    windows
}
