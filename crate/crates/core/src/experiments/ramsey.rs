// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use rayon::prelude::*;

use crate::circuit::{schedule_alap, Circuit, GateKind, ScheduledCircuit};
use crate::dd::{insert_dd, DDPlan};
use crate::device::{DeviceModel, QubitId};
use crate::sim::{simulate, DensityMatrix, NoiseConfig};

use super::{check_delays, fit_curve, plan_labels, ExperimentError, ExperimentResult, FitModel};

/// Where the Ramsey detuning lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetuningKind {
    /// Frame rotation applied just before the closing pulse; DD cannot echo
    /// it.
    #[default]
    Virtual,
    /// Physical Z drift on the qubit during the whole sequence.
    Physical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamseyConfig {
    pub qubit: QubitId,
    /// Neighbour left in |0⟩; its ZZ coupling shifts the fringe.
    pub spectator: QubitId,
    pub detuning_khz: f64,
    pub delays: Vec<u64>,
    pub detuning_kind: DetuningKind,
}

impl RamseyConfig {
    /// 51 delays from 0 in steps of 4000 dt.
    pub fn new(qubit: QubitId, spectator: QubitId, detuning_khz: f64) -> Self {
        RamseyConfig {
            qubit,
            spectator,
            detuning_khz,
            delays: (0..=50).map(|k| 4000 * k).collect(),
            detuning_kind: DetuningKind::Virtual,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !(self.detuning_khz.is_finite() && self.detuning_khz > 0.0) {
            return Err(ExperimentError::Config("Ramsey detuning must be positive".into()));
        }
        if self.qubit == self.spectator {
            return Err(ExperimentError::Config("spectator must differ from the Ramsey qubit".into()));
        }
        check_delays(&self.delays)
    }
}

/// H, free evolution of `delay` dt on both qubits, frame rotation, H,
/// measurement of the Ramsey qubit.
pub fn ramsey_circuit(
    config: &RamseyConfig,
    delay: u64,
    device: &DeviceModel,
) -> Result<ScheduledCircuit, ExperimentError> {
    let (q, s) = (config.qubit, config.spectator);
    let mut c = Circuit::new(vec![q, s]);
    c.gate(GateKind::H, &[q]).barrier(&[q, s]);
    if delay > 0 {
        c.delay(&[q, s], delay);
    }
    c.barrier(&[q, s]);
    if config.detuning_kind == DetuningKind::Virtual {
        let t_s = device.dt.as_seconds() * delay as f64;
        c.gate(GateKind::RZ(-TAU * config.detuning_khz * 1e3 * t_s), &[q]);
    }
    c.gate(GateKind::H, &[q]).gate(GateKind::Measure, &[q]);
    Ok(schedule_alap(&c, device)?)
}

/// Probability of reading 0 on the Ramsey qubit at every delay. A DD plan
/// should cover both the qubit and the spectator.
pub fn run_ramsey(
    config: &RamseyConfig,
    plan: Option<&DDPlan>,
    device: &DeviceModel,
    noise: &NoiseConfig,
) -> Result<ExperimentResult, ExperimentError> {
    config.validate()?;
    let mut noise = noise.clone();
    if config.detuning_kind == DetuningKind::Physical {
        *noise.detunings.entry(config.qubit).or_insert(0.0) += config.detuning_khz;
    }
    let fidelity = config
        .delays
        .par_iter()
        .map(|&d| {
            let mut circuit = ramsey_circuit(config, d, device)?;
            if let Some(p) = plan {
                circuit = insert_dd(&circuit, p, device)?.0;
            }
            let rho = simulate(&circuit, device, &noise, &DensityMatrix::zero(2)?)?;
            Ok(rho.marginal_population(&[(0, 0)]).clamp(0.0, 1.0))
        })
        .collect::<Result<Vec<f64>, ExperimentError>>()?;
    let (sequence, mode) = plan_labels(plan);
    Ok(ExperimentResult {
        experiment: "ramsey".into(),
        sequence,
        mode,
        pair: (config.qubit, config.spectator),
        delays: config.delays.clone(),
        fidelity,
        seed: 0,
        dt: device.dt,
    })
}

/// ZZ strength (kHz) on the qubit–spectator pair for which the fitted
/// fringe frequency under `plan` equals `target_khz`, by bisection over
/// `bracket`.
pub fn calibrate_zz_for_frequency(
    target_khz: f64,
    config: &RamseyConfig,
    plan: Option<&DDPlan>,
    device: &DeviceModel,
    noise: &NoiseConfig,
    bracket: (f64, f64),
) -> Result<f64, ExperimentError> {
    let fringe = |nu: f64| -> Result<f64, ExperimentError> {
        let noise = noise.clone().with_zz(config.qubit, config.spectator, nu);
        let r = run_ramsey(config, plan, device, &noise)?;
        Ok(fit_curve(&r, FitModel::DampedCosine)?.rate_or_freq - target_khz)
    };
    let (mut lo, mut hi) = bracket;
    let (mut f_lo, f_hi) = (fringe(lo)?, fringe(hi)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(ExperimentError::Config(format!(
            "target {target_khz} kHz is not bracketed by ZZ strengths {lo}..{hi} kHz"
        )));
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let f_mid = fringe(mid)?;
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-6 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_missing_detuning_and_empty_delays() {
        let d = DeviceModel::bundled();
        let mut cfg = RamseyConfig::new(14, 13, 0.0);
        assert!(run_ramsey(&cfg, None, &d, &NoiseConfig::noiseless()).is_err());
        cfg.detuning_khz = 100.0;
        cfg.delays.clear();
        assert!(run_ramsey(&cfg, None, &d, &NoiseConfig::noiseless()).is_err());
    }

    #[test]
    fn noiseless_fringe_follows_detuning() {
        let d = DeviceModel::bundled();
        let mut cfg = RamseyConfig::new(14, 13, 100.0);
        cfg.delays = vec![0, 1125, 2250];
        let r = run_ramsey(&cfg, None, &d, &NoiseConfig::noiseless()).unwrap();
        for (&delay, &p) in cfg.delays.iter().zip(&r.fidelity) {
            let t = d.dt.as_seconds() * delay as f64;
            let expected = 0.5 * (1.0 + (TAU * 100e3 * t).cos());
            assert!((p - expected).abs() < 1e-12);
        }
    }
}
