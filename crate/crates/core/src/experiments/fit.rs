// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Least-squares fits of decay and fringe curves (Levenberg–Marquardt).
//!
//! Times are in µs. A damped cosine reports its frequency in kHz; an
//! exponential decay reports its rate in 1/µs.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use thiserror::Error;

use super::ExperimentResult;

const MAX_ITERATIONS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitModel {
    /// A·e^{−t/τ} + B
    ExpDecay,
    /// A·e^{−t/T}·cos(2πft + φ) + B
    DampedCosine,
}

impl FitModel {
    pub fn as_str(&self) -> &'static str {
        match self {
            FitModel::ExpDecay => "exp-decay",
            FitModel::DampedCosine => "damped-cosine",
        }
    }

    pub fn min_points(&self) -> usize {
        match self {
            FitModel::ExpDecay => 5,
            FitModel::DampedCosine => 8,
        }
    }
}

impl fmt::Display for FitModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("{model} fit needs at least {need} points, got {got}")]
    TooFewPoints { model: FitModel, need: usize, got: usize },
    #[error("time and value series differ in length ({0} vs {1})")]
    Length(usize, usize),
    #[error("data contains non-finite values")]
    NonFinite,
    #[error("data is constant; {0} parameters are not identifiable")]
    Degenerate(FitModel),
    #[error("{model} fit did not converge after {iterations} iterations (rms residual {residual_rms:e})")]
    NoConvergence {
        model: FitModel,
        iterations: usize,
        residual_rms: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: FitModel,
    pub amplitude: f64,
    /// Frequency f in kHz (damped cosine) or rate 1/τ in 1/µs (decay).
    pub rate_or_freq: f64,
    /// φ in (−π, π]; zero for the decay model.
    pub phase: f64,
    pub offset: f64,
    /// T or τ in µs; infinite when the fitted rate is not positive.
    pub decay_time_us: f64,
    pub residual_rms: f64,
    pub iterations: usize,
}

fn decay_time(rate: f64) -> f64 {
    if rate > 0.0 {
        1.0 / rate
    } else {
        f64::INFINITY
    }
}

type Model = fn(&[f64], f64) -> (f64, Vec<f64>);

fn damped_cosine(p: &[f64], t: f64) -> (f64, Vec<f64>) {
    let [a, g, f, ph, b] = [p[0], p[1], p[2], p[3], p[4]];
    let e = (-g * t).exp();
    let arg = TAU * f * t + ph;
    let (s, c) = arg.sin_cos();
    let y = a * e * c + b;
    (y, vec![e * c, -t * a * e * c, -a * e * s * TAU * t, -a * e * s, 1.0])
}

fn exp_decay(p: &[f64], t: f64) -> (f64, Vec<f64>) {
    let [a, k, b] = [p[0], p[1], p[2]];
    let e = (-k * t).exp();
    (a * e + b, vec![e, -t * a * e, 1.0])
}

fn cost(model: Model, p: &[f64], t: &[f64], y: &[f64]) -> f64 {
    t.iter().zip(y).map(|(&ti, &yi)| (yi - model(p, ti).0).powi(2)).sum()
}

/// Returns fitted parameters, final cost and iteration count.
fn levenberg_marquardt(model: Model, mut p: Vec<f64>, t: &[f64], y: &[f64]) -> Option<(Vec<f64>, f64, usize)> {
    let n = p.len();
    let mut lambda = 1e-3;
    let mut current = cost(model, &p, t, y);
    for iter in 1..=MAX_ITERATIONS {
        let mut jac = DMatrix::zeros(t.len(), n);
        let mut r = DVector::zeros(t.len());
        for (i, (&ti, &yi)) in t.iter().zip(y).enumerate() {
            let (v, grad) = model(&p, ti);
            r[i] = yi - v;
            for (j, gj) in grad.into_iter().enumerate() {
                jac[(i, j)] = gj;
            }
        }
        let jt = jac.transpose();
        let h = &jt * &jac;
        let g = &jt * &r;
        loop {
            let mut damped = h.clone();
            for j in 0..n {
                damped[(j, j)] += lambda * h[(j, j)].max(1e-12);
            }
            let step = damped.lu().solve(&g)?;
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let c = cost(model, &trial, t, y);
            if c.is_finite() && c <= current {
                let improvement = current - c;
                p = trial;
                current = c;
                lambda = (lambda / 10.0).max(1e-12);
                if improvement <= 1e-15 * current.max(1e-300) || step.norm() < 1e-14 {
                    return Some((p, current, iter));
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                // no descent direction left: at a minimum to working precision
                return Some((p, current, iter));
            }
        }
    }
    None
}

fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

/// Strongest frequency (MHz) in the residual spectrum and its phase, from a
/// direct sum on the possibly non-uniform grid.
fn spectral_peak(t: &[f64], y: &[f64], mean: f64) -> (f64, f64, f64) {
    let span = t[t.len() - 1] - t[0];
    let mut gaps: Vec<f64> = t.windows(2).map(|w| w[1] - w[0]).filter(|g| *g > 0.0).collect();
    gaps.sort_by(f64::total_cmp);
    let typical = gaps.get(gaps.len() / 2).copied().unwrap_or(span);
    let nyquist = 0.5 / typical;
    let df = 1.0 / (8.0 * span);
    let mut best = (0.0, 0.0, Complex64::new(0.0, 0.0));
    let mut f = df;
    while f <= nyquist {
        let s: Complex64 = t
            .iter()
            .zip(y)
            .map(|(&ti, &yi)| (yi - mean) * Complex64::from_polar(1.0, -TAU * f * ti))
            .sum();
        if s.norm() > best.1 {
            best = (f, s.norm(), s);
        }
        f += df;
    }
    let amp = 2.0 * best.1 / t.len() as f64;
    (best.0, best.2.arg(), amp)
}

/// Fit `y(t)` with `t` in µs.
pub fn fit_series(t: &[f64], y: &[f64], model: FitModel) -> Result<FitResult, FitError> {
    if t.len() != y.len() {
        return Err(FitError::Length(t.len(), y.len()));
    }
    if t.len() < model.min_points() {
        return Err(FitError::TooFewPoints {
            model,
            need: model.min_points(),
            got: t.len(),
        });
    }
    if t.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(FitError::NonFinite);
    }
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let spread = y.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    if spread <= 1e-12 * mean.abs().max(1.0) {
        return Err(FitError::Degenerate(model));
    }
    let span = t[t.len() - 1] - t[0];
    let m = t.len() as f64;

    let (f_model, starts): (Model, Vec<Vec<f64>>) = match model {
        FitModel::DampedCosine => {
            let (f0, phi0, a0) = spectral_peak(t, y, mean);
            let starts = [1.0, 0.1]
                .iter()
                .map(|scale| vec![a0, scale / span, f0, phi0, mean])
                .collect();
            (damped_cosine, starts)
        }
        FitModel::ExpDecay => {
            let b0 = y[y.len() - 1];
            let a0 = y[0] - b0;
            let starts = [0.3, 1.0, 3.0, 10.0].iter().map(|k| vec![a0, k / span, b0]).collect();
            (exp_decay, starts)
        }
    };

    let mut best: Option<(Vec<f64>, f64, usize)> = None;
    for p0 in starts {
        if let Some(fit) = levenberg_marquardt(f_model, p0, t, y) {
            if best.as_ref().is_none_or(|b| fit.1 < b.1) {
                best = Some(fit);
            }
        }
    }
    let Some((p, c, iterations)) = best else {
        return Err(FitError::NoConvergence {
            model,
            iterations: MAX_ITERATIONS,
            residual_rms: (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m).sqrt(),
        });
    };
    let residual_rms = (c / m).sqrt();
    Ok(match model {
        FitModel::DampedCosine => {
            let (mut a, g, mut f, mut ph, b) = (p[0], p[1], p[2], p[3], p[4]);
            if f < 0.0 {
                f = -f;
                ph = -ph;
            }
            if a < 0.0 {
                a = -a;
                ph += PI;
            }
            FitResult {
                model,
                amplitude: a,
                rate_or_freq: f * 1e3,
                phase: wrap_phase(ph),
                offset: b,
                decay_time_us: decay_time(g),
                residual_rms,
                iterations,
            }
        }
        FitModel::ExpDecay => FitResult {
            model,
            amplitude: p[0],
            rate_or_freq: p[1],
            phase: 0.0,
            offset: p[2],
            decay_time_us: decay_time(p[1]),
            residual_rms,
            iterations,
        },
    })
}

/// Fit an experiment's fidelity against its delays.
pub fn fit_curve(result: &ExperimentResult, model: FitModel) -> Result<FitResult, FitError> {
    fit_series(&result.delays_us(), &result.fidelity, model)
}
