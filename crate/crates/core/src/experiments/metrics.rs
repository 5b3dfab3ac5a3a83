// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::{ExperimentError, ExperimentResult};

/// Time-averaged normalised fidelity: the trapezoid integral of F(t)/F(t₀)
/// over the sampled delays divided by their span.
pub fn time_avg_fidelity(result: &ExperimentResult) -> Result<f64, ExperimentError> {
    if result.delays.len() != result.fidelity.len() {
        return Err(ExperimentError::Metric("delays and fidelities differ in length".into()));
    }
    if result.len() < 2 {
        return Err(ExperimentError::Metric("need at least two delay points".into()));
    }
    let f0 = result.fidelity[0];
    if f0.is_nan() || f0 <= 0.0 {
        return Err(ExperimentError::Metric("reference fidelity F(0) is zero".into()));
    }
    let t: Vec<f64> = result.delays.iter().map(|&d| d as f64).collect();
    let span = t[t.len() - 1] - t[0];
    if span <= 0.0 {
        return Err(ExperimentError::Metric("delays span zero time".into()));
    }
    let area: f64 = t
        .windows(2)
        .zip(result.fidelity.windows(2))
        .map(|(tw, fw)| 0.5 * (tw[1] - tw[0]) * (fw[0] + fw[1]))
        .sum();
    Ok(area / (span * f0))
}

/// Replace exact probabilities by binomial estimates from `shots`
/// repetitions. Draws come from a stream of the run seed separate from the
/// one used for circuit sampling.
pub fn sample_shots(result: &mut ExperimentResult, shots: u64, seed: u64) -> Result<(), ExperimentError> {
    if shots == 0 {
        return Err(ExperimentError::Config("shot count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    for p in &mut result.fidelity {
        let dist = Binomial::new(shots, p.clamp(0.0, 1.0)).map_err(|e| ExperimentError::Config(e.to_string()))?;
        *p = dist.sample(&mut rng) as f64 / shots as f64;
    }
    Ok(())
}
