// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Exact density-matrix simulation of scheduled circuits on up to four
//! qubits.
//!
//! Gates act instantaneously at their scheduled start. Between consecutive
//! event times the register drifts under the always-on ZZ couplings, any
//! physical detuning, and (optionally) thermal relaxation of every qubit.

mod channels;
mod density;

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{GateKind, Instruction, ScheduledCircuit};
use crate::device::{DeviceModel, QubitId};
use crate::linalg::{self, CMat};

pub use channels::relaxation_channel;
pub use density::{ket0, ket1, plus, DensityMatrix, MAX_QUBITS};

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{0} qubits exceed the simulator limit of 4")]
    TooManyQubits(usize),
    #[error("instruction {0} is not scheduled")]
    Unscheduled(usize),
    #[error("invalid coherence times: T2 = {t2} µs must satisfy 0 < T2 ≤ 2·T1 = {} µs", 2.0 * t1)]
    InvalidCoherence { t1: f64, t2: f64 },
    #[error("invalid noise configuration: {0}")]
    InvalidNoise(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

/// ZZ `θ` rotation exp(−iθ/2·Z⊗Z).
pub fn zz_unitary(theta: f64) -> CMat {
    linalg::zz(theta)
}

/// How the static ZZ interaction is applied in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZzMode {
    /// Always on, including while gates are playing.
    #[default]
    Continuous,
    /// One discrete ZZ(θ) per stretch of free evolution, with θ set by the
    /// stretch length; nothing accrues while either qubit runs a gate.
    PreDelayGate,
}

impl FromStr for ZzMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "continuous" => Ok(ZzMode::Continuous),
            "pre-delay" | "pre_delay" | "pre-delay-gate" | "pre_delay_gate" => Ok(ZzMode::PreDelayGate),
            other => Err(format!("unknown ZZ mode `{other}` (expected continuous or pre-delay)")),
        }
    }
}

impl fmt::Display for ZzMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZzMode::Continuous => "continuous",
            ZzMode::PreDelayGate => "pre-delay",
        })
    }
}

/// Noise sources applied during simulation. The default is noiseless.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoiseConfig {
    /// ZZ strength ν (kHz) per unordered pair; θ = 2π·ν·t.
    pub zz_pairs: BTreeMap<(QubitId, QubitId), f64>,
    /// Thermal relaxation from each qubit's device T1/T2.
    pub relaxation: bool,
    /// Physical frequency offset (kHz) per qubit, a Z drift Rz(2π·f·t).
    pub detunings: BTreeMap<QubitId, f64>,
    /// Coherent over-rotation of the π pulses: Xp → Rx(π+ε),
    /// Xm → Rx(−π−ε), likewise for Y.
    pub overrotation_epsilon: f64,
    pub zz_mode: ZzMode,
    /// Switch off a pair's own ZZ while it runs a CX (rotary-echo
    /// calibration).
    pub rotary_suppression: bool,
}

impl NoiseConfig {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn with_zz(mut self, a: QubitId, b: QubitId, nu_khz: f64) -> Self {
        self.zz_pairs.insert(pair_key(a, b), nu_khz);
        self
    }

    pub fn with_relaxation(mut self, on: bool) -> Self {
        self.relaxation = on;
        self
    }

    pub fn with_detuning(mut self, q: QubitId, khz: f64) -> Self {
        self.detunings.insert(q, khz);
        self
    }

    /// Every device coupling among `qubits` with its ZZ strength.
    pub fn from_device(device: &DeviceModel, qubits: &[QubitId]) -> Self {
        let mut cfg = NoiseConfig {
            relaxation: true,
            rotary_suppression: true,
            ..Default::default()
        };
        for (i, &a) in qubits.iter().enumerate() {
            for &b in &qubits[i + 1..] {
                if let Some(nu) = device.zz_strength(a, b) {
                    cfg.zz_pairs.insert(pair_key(a, b), nu);
                }
            }
        }
        cfg
    }

    pub fn zz(&self, a: QubitId, b: QubitId) -> Option<f64> {
        self.zz_pairs.get(&pair_key(a, b)).copied()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if let Some((k, v)) = self.zz_pairs.iter().find(|(_, v)| !v.is_finite()) {
            return Err(SimError::InvalidNoise(format!("ZZ strength {v} for pair {k:?} is not finite")));
        }
        if let Some(((a, b), _)) = self.zz_pairs.iter().find(|((a, b), _)| a == b) {
            return Err(SimError::InvalidNoise(format!("ZZ pair ({a}, {b}) is not a pair")));
        }
        if let Some((q, v)) = self.detunings.iter().find(|(_, v)| !v.is_finite()) {
            return Err(SimError::InvalidNoise(format!("detuning {v} for qubit {q} is not finite")));
        }
        if self.overrotation_epsilon.is_nan() || self.overrotation_epsilon.abs() >= PI / 2.0 {
            return Err(SimError::InvalidNoise("|ε| must be below π/2".into()));
        }
        Ok(())
    }
}

pub fn pair_key(a: QubitId, b: QubitId) -> (QubitId, QubitId) {
    (a.min(b), a.max(b))
}

fn gate_matrix(kind: &GateKind, eps: f64) -> Option<CMat> {
    match kind {
        GateKind::Xp if eps != 0.0 => Some(linalg::rx(PI + eps)),
        GateKind::Xm if eps != 0.0 => Some(linalg::rx(-PI - eps)),
        GateKind::Yp if eps != 0.0 => Some(linalg::ry(PI + eps)),
        GateKind::Ym if eps != 0.0 => Some(linalg::ry(-PI - eps)),
        other => other.matrix(),
    }
}

struct ZzTerm {
    a: usize,
    b: usize,
    ids: (QubitId, QubitId),
    /// radians per dt
    rate: f64,
}

/// Busy intervals (non-delay, positive duration) per register position.
fn busy_intervals(circuit: &ScheduledCircuit) -> Vec<Vec<(u64, u64, usize)>> {
    let mut busy = vec![Vec::new(); circuit.num_qubits()];
    for (idx, inst) in circuit.instructions().iter().enumerate() {
        let (s, d) = (inst.start.unwrap_or(0), inst.duration.unwrap_or(0));
        if d == 0 || matches!(inst.kind, GateKind::Delay(_) | GateKind::Barrier) {
            continue;
        }
        for q in &inst.qubits {
            let p = circuit.position(*q).expect("validated");
            busy[p].push((s, s + d, idx));
        }
    }
    busy
}

fn covering(intervals: &[(u64, u64, usize)], t: u64) -> Option<usize> {
    intervals.iter().find(|&&(s, e, _)| s <= t && t < e).map(|&(_, _, i)| i)
}

/// Evolve `initial` through a scheduled circuit.
pub fn simulate(
    circuit: &ScheduledCircuit,
    device: &DeviceModel,
    noise: &NoiseConfig,
    initial: &DensityMatrix,
) -> Result<DensityMatrix, SimError> {
    let n = circuit.num_qubits();
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits(n));
    }
    if initial.num_qubits() != n {
        return Err(SimError::Dimension(format!(
            "circuit has {n} qubits, initial state has {}",
            initial.num_qubits()
        )));
    }
    noise.validate()?;
    for (i, inst) in circuit.instructions().iter().enumerate() {
        if inst.start.is_none() || inst.duration.is_none() {
            return Err(SimError::Unscheduled(i));
        }
    }

    let dt_s = device.dt.as_seconds();
    let dt_us = device.dt.as_ns() * 1e-3;
    let zz_terms: Vec<ZzTerm> = noise
        .zz_pairs
        .iter()
        .filter_map(|(&(a, b), &nu)| {
            Some(ZzTerm {
                a: circuit.position(a)?,
                b: circuit.position(b)?,
                ids: (a, b),
                rate: TAU * nu * 1e3 * dt_s,
            })
        })
        .collect();
    let detune: Vec<(usize, f64)> = noise
        .detunings
        .iter()
        .filter_map(|(&q, &f)| Some((circuit.position(q)?, TAU * f * 1e3 * dt_s)))
        .collect();
    let coherence: Vec<(f64, f64)> = if noise.relaxation {
        circuit
            .qubits()
            .iter()
            .map(|&q| {
                let p = device
                    .qubit(q)
                    .ok_or_else(|| SimError::InvalidNoise(format!("qubit {q} has no device coherence data")))?;
                if !(p.t1 > 0.0 && p.t2 > 0.0) || p.t2 > 2.0 * p.t1 {
                    return Err(SimError::InvalidCoherence { t1: p.t1, t2: p.t2 });
                }
                Ok((p.t1, p.t2))
            })
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };

    let mut order: Vec<usize> = (0..circuit.instructions().len()).collect();
    order.sort_by_key(|&i| circuit.instructions()[i].start.expect("checked"));
    let mut times: Vec<u64> = circuit
        .instructions()
        .iter()
        .flat_map(|i| [i.start.expect("checked"), i.end().expect("checked")])
        .chain([0, circuit.total_duration()])
        .collect();
    times.sort_unstable();
    times.dedup();
    let busy = busy_intervals(circuit);

    let dim = 1usize << n;
    let z_sign = |idx: usize, p: usize| if linalg::bit(idx, p, n) == 0 { 1.0 } else { -1.0 };
    let mut rho = initial.clone();
    let mut next = 0;
    for (k, &t) in times.iter().enumerate() {
        while next < order.len() && circuit.instructions()[order[next]].start == Some(t) {
            apply_instruction(&mut rho, circuit, &circuit.instructions()[order[next]], noise.overrotation_epsilon);
            next += 1;
        }
        let Some(&t_next) = times.get(k + 1) else {
            break;
        };
        let span = (t_next - t) as f64;

        let mut phases = vec![0.0; dim];
        let mut any_phase = false;
        for term in &zz_terms {
            let (ba, bb) = (covering(&busy[term.a], t), covering(&busy[term.b], t));
            let active = match noise.zz_mode {
                ZzMode::Continuous => {
                    let suppressed = noise.rotary_suppression
                        && ba.is_some()
                        && ba == bb
                        && is_cx_on(&circuit.instructions()[ba.expect("some")], term.ids);
                    !suppressed
                }
                ZzMode::PreDelayGate => ba.is_none() && bb.is_none(),
            };
            if !active || term.rate == 0.0 {
                continue;
            }
            any_phase = true;
            let half = term.rate * span / 2.0;
            for (idx, ph) in phases.iter_mut().enumerate() {
                *ph -= half * z_sign(idx, term.a) * z_sign(idx, term.b);
            }
        }
        for &(p, rate) in &detune {
            if rate == 0.0 {
                continue;
            }
            any_phase = true;
            let half = rate * span / 2.0;
            for (idx, ph) in phases.iter_mut().enumerate() {
                *ph -= half * z_sign(idx, p);
            }
        }
        if any_phase {
            rho.apply_diagonal_phases(&phases);
        }
        for (p, &(t1, t2)) in coherence.iter().enumerate() {
            channels::apply_relaxation(&mut rho, p, span * dt_us, t1, t2)?;
        }
    }
    Ok(rho)
}

fn is_cx_on(inst: &Instruction, ids: (QubitId, QubitId)) -> bool {
    inst.kind == GateKind::CX && pair_key(inst.qubits[0], inst.qubits[1]) == ids
}

fn apply_instruction(rho: &mut DensityMatrix, circuit: &ScheduledCircuit, inst: &Instruction, eps: f64) {
    if let Some(m) = gate_matrix(&inst.kind, eps) {
        let targets: Vec<usize> = inst
            .qubits
            .iter()
            .map(|q| circuit.position(*q).expect("validated"))
            .collect();
        rho.apply_unitary(&m, &targets);
    }
}

/// ⟨bits|ρ|bits⟩ for a full-register bitstring.
pub fn expectation_population(rho: &DensityMatrix, bits: &str) -> Result<f64, SimError> {
    rho.population(bits)
}
