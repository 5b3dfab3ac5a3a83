// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Benchmark circuits, their simulation, and the metrics drawn from them.

mod fit;
mod metrics;
mod output;
mod ramsey;
mod rb;

use thiserror::Error;

use crate::circuit::CircuitError;
use crate::dd::DdError;
use crate::device::{DeviceError, Dt, QubitId};
use crate::sim::SimError;

pub use fit::{fit_curve, fit_series, FitError, FitModel, FitResult};
pub use metrics::{sample_shots, time_avg_fidelity};
pub use output::{write_fit_csv, write_results_csv, FIT_HEADER, RESULTS_HEADER};
pub use ramsey::{calibrate_zz_for_frequency, ramsey_circuit, run_ramsey, DetuningKind, RamseyConfig};
pub use rb::{
    gen_rb_circuit, haar_su4, rb_circuit, run_driven_idle, run_idle_idle, run_rb, DrivenIdleConfig, RbSequence,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid experiment configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Device(#[from] DeviceError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Dd(#[from] DdError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("metric undefined: {0}")]
    Metric(String),
    #[error("output error: {0}")]
    Output(String),
}

/// Default sweep of the idle period 2τ: 1280 to 14080 dt in steps of 1280.
pub fn default_delays() -> Vec<u64> {
    (1..=11).map(|k| 1280 * k).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RBConfig {
    pub qubit_pair: (QubitId, QubitId),
    pub n_cliffords: usize,
    /// Idle period 2τ after each Clifford, in dt, ascending.
    pub delays_2tau: Vec<u64>,
    pub seed: u64,
}

impl RBConfig {
    pub fn new(qubit_pair: (QubitId, QubitId), seed: u64) -> Self {
        RBConfig {
            qubit_pair,
            n_cliffords: 8,
            delays_2tau: default_delays(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.n_cliffords == 0 {
            return Err(ExperimentError::Config("at least one Clifford is required".into()));
        }
        if self.qubit_pair.0 == self.qubit_pair.1 {
            return Err(ExperimentError::Config("RB pair must be two distinct qubits".into()));
        }
        check_delays(&self.delays_2tau)
    }
}

fn check_delays(delays: &[u64]) -> Result<(), ExperimentError> {
    if delays.is_empty() {
        return Err(ExperimentError::Config("delay list is empty".into()));
    }
    if delays.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExperimentError::Config("delays must be strictly ascending".into()));
    }
    Ok(())
}

/// Return probability per delay point with the settings that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub experiment: String,
    pub sequence: String,
    pub mode: String,
    pub pair: (QubitId, QubitId),
    pub delays: Vec<u64>,
    pub fidelity: Vec<f64>,
    pub seed: u64,
    /// Sample period the delays are counted in.
    pub dt: Dt,
}

impl ExperimentResult {
    pub fn len(&self) -> usize {
        self.delays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delays.is_empty()
    }

    pub fn delays_us(&self) -> Vec<f64> {
        self.delays.iter().map(|&d| self.dt.samples_to_us(d)).collect()
    }
}

/// Label pair for results: sequence name and mode, or "none"/"free".
pub(crate) fn plan_labels(plan: Option<&crate::dd::DDPlan>) -> (String, String) {
    match plan {
        Some(p) => (p.sequence.name.to_string(), p.mode.as_str().to_string()),
        None => ("none".into(), "free".into()),
    }
}
