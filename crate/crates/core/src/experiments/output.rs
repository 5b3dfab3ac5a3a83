// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

use serde::Serialize;

use super::{ExperimentError, ExperimentResult, FitResult};

pub const RESULTS_HEADER: &str = "experiment,sequence,mode,pair,delay_dt,delay_ns,fidelity,seed";
pub const FIT_HEADER: &str = "experiment,model,amplitude,rate_or_freq,phase,offset,residual_rms";

#[derive(Serialize)]
struct ResultRow<'a> {
    experiment: &'a str,
    sequence: &'a str,
    mode: &'a str,
    pair: String,
    delay_dt: u64,
    delay_ns: f64,
    fidelity: f64,
    seed: u64,
}

#[derive(Serialize)]
struct FitRow<'a> {
    experiment: &'a str,
    model: &'a str,
    amplitude: f64,
    rate_or_freq: f64,
    phase: f64,
    offset: f64,
    residual_rms: f64,
}

fn csv_err(e: impl std::fmt::Display) -> ExperimentError {
    ExperimentError::Output(e.to_string())
}

/// One row per delay point of every result, in order.
pub fn write_results_csv<W: Write>(out: W, results: &[ExperimentResult]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for r in results {
        for (&d, &f) in r.delays.iter().zip(&r.fidelity) {
            w.serialize(ResultRow {
                experiment: &r.experiment,
                sequence: &r.sequence,
                mode: &r.mode,
                pair: format!("{}-{}", r.pair.0, r.pair.1),
                delay_dt: d,
                delay_ns: r.dt.samples_to_ns(d),
                fidelity: f,
                seed: r.seed,
            })
            .map_err(csv_err)?;
        }
    }
    if results.iter().all(|r| r.is_empty()) {
        w.write_record(RESULTS_HEADER.split(',')).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}

/// One row per labelled fit.
pub fn write_fit_csv<W: Write>(out: W, fits: &[(String, FitResult)]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for (experiment, f) in fits {
        w.serialize(FitRow {
            experiment,
            model: f.model.as_str(),
            amplitude: f.amplitude,
            rate_or_freq: f.rate_or_freq,
            phase: f.phase,
            offset: f.offset,
            residual_rms: f.residual_rms,
        })
        .map_err(csv_err)?;
    }
    if fits.is_empty() {
        w.write_record(FIT_HEADER.split(',')).map_err(csv_err)?;
    }
    w.flush().map_err(csv_err)
}
