// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet};

use crate::circuit::{find_idle_windows, resolve_duration, GateKind, IdleWindow, Instruction, ScheduledCircuit};
use crate::device::DeviceModel;

use super::timing::{placement_error, pulse_times};
use super::{DDPlan, DdError};

/// What the pass did, window by window.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InsertionReport {
    pub filled: Vec<IdleWindow>,
    /// Windows too short for the sequence; left as they were.
    pub skipped: Vec<IdleWindow>,
    /// Largest offset (dt) between a placed pulse centre and its ideal
    /// position, over all filled windows.
    pub max_placement_error: f64,
}

impl InsertionReport {
    pub fn insertions(&self) -> usize {
        self.filled.len()
    }
}

fn timed(kind: GateKind, qubit: u32, start: u64, duration: u64) -> Instruction {
    let mut inst = Instruction::new(kind, vec![qubit]).with_duration(duration);
    inst.start = Some(start);
    inst
}

/// Fill the idle windows of every qubit in the plan with the plan's
/// sequence. Explicit delays inside a filled window are replaced by
/// delay/pulse/delay segments; total duration is unchanged.
pub fn insert_dd(
    circuit: &ScheduledCircuit,
    plan: &DDPlan,
    device: &DeviceModel,
) -> Result<(ScheduledCircuit, InsertionReport), DdError> {
    let mut report = InsertionReport::default();
    let mut removed: HashSet<usize> = HashSet::new();
    let mut before: HashMap<usize, Vec<Instruction>> = HashMap::new();
    let mut appended: Vec<Instruction> = Vec::new();
    let n = plan.sequence.len();

    for window in find_idle_windows(circuit) {
        let Some(role) = plan.role(window.qubit) else {
            continue;
        };
        let gate_duration = plan
            .sequence
            .gates
            .iter()
            .map(|g| resolve_duration(g, &[window.qubit], device))
            .try_fold(0u64, |acc, d| d.map(|d| acc.max(d)))?;
        let starts = match pulse_times(window.duration, n, role, gate_duration) {
            Ok(s) => s,
            Err(DdError::WindowTooShort { .. }) => {
                report.skipped.push(window);
                continue;
            }
            Err(e) => return Err(e),
        };
        report.max_placement_error = report
            .max_placement_error
            .max(placement_error(window.duration, &starts, role, gate_duration));

        let mut next_index = None;
        for (idx, inst) in circuit.on_qubit(window.qubit) {
            let s = inst.start.expect("scheduled");
            let e = s + inst.duration.expect("scheduled");
            if matches!(inst.kind, GateKind::Delay(_)) {
                if s >= window.start && e <= window.end() {
                    removed.insert(idx);
                }
            } else if s == window.end() && next_index.is_none() {
                next_index = Some(idx);
            }
        }

        let mut segment = Vec::with_capacity(2 * n + 1);
        let mut cursor = window.start;
        for (gate, offset) in plan.sequence.gates.iter().zip(&starts) {
            let at = window.start + offset;
            if at > cursor {
                segment.push(timed(GateKind::Delay(at - cursor), window.qubit, cursor, at - cursor));
            }
            segment.push(timed(gate.clone(), window.qubit, at, gate_duration));
            cursor = at + gate_duration;
        }
        if window.end() > cursor {
            let rest = window.end() - cursor;
            segment.push(timed(GateKind::Delay(rest), window.qubit, cursor, rest));
        }
        match next_index {
            Some(idx) => before.entry(idx).or_default().extend(segment),
            None => appended.extend(segment),
        }
        report.filled.push(window);
    }

    let mut instructions = Vec::with_capacity(circuit.instructions().len() + appended.len());
    for (idx, inst) in circuit.instructions().iter().enumerate() {
        if let Some(seg) = before.remove(&idx) {
            instructions.extend(seg);
        }
        if !removed.contains(&idx) {
            instructions.push(inst.clone());
        }
    }
    instructions.extend(appended);
    let out = ScheduledCircuit::from_parts(circuit.qubits().to_vec(), instructions)?;
    debug_assert_eq!(out.total_duration(), circuit.total_duration());
    Ok((out, report))
}
