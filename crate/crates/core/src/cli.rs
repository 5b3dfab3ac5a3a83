// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit status: 0 on success, 1 for invalid input or configuration, 2 when
//! a simulation, fit or verification fails.

use std::ffi::OsString;
use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::circuit::{emit_text, parse_text, schedule_alap, schedule_asap, CircuitError};
use crate::dd::{algebra, insert_dd, DDMode, DDPlan, DDSequence, DdError, SequenceName};
use crate::device::{compute_zz, DeviceModel, QubitId};
use crate::experiments::{
    fit_curve, run_driven_idle, run_idle_idle, run_ramsey, sample_shots, time_avg_fidelity, write_fit_csv,
    write_results_csv, DrivenIdleConfig, ExperimentError, ExperimentResult, FitError, FitModel, FitResult,
    RBConfig, RamseyConfig,
};
use crate::sim::{plus, simulate, DensityMatrix, NoiseConfig, ZzMode};

pub const DEVICE_ENV: &str = "STAGGER_DD_DEVICE";
pub const RESULTS_FILE: &str = "results.csv";
pub const FITS_FILE: &str = "fits.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "stagger-dd", version, about = "Staggered dynamical decoupling against ZZ crosstalk")]
pub struct Cli {
    /// Device description (TOML). Defaults to the bundled ten-qubit device.
    #[arg(long, global = true, env = DEVICE_ENV)]
    pub device: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Static ZZ strength of a coupled pair, in kHz.
    ZzCalc(ZzArgs),
    /// Run an experiment sweep and write CSV results.
    Run {
        experiment: Experiment,
        #[command(flatten)]
        args: Box<RunArgs>,
    },
    /// Schedule a text-format circuit, insert DD and print the result.
    Pass(PassArgs),
    /// Check the decoupling identities and exact ZZ cancellation.
    Verify,
}

#[derive(Debug, Args)]
pub struct PassArgs {
    /// Circuit in the text format; `-` reads standard input.
    pub input: PathBuf,
    #[arg(long, default_value = "x2pm")]
    pub sequence: String,
    /// standard, staggered, staggered-inv or none.
    #[arg(long, default_value = "staggered")]
    pub mode: String,
    /// Schedule as soon as possible instead of as late as possible.
    #[arg(long)]
    pub asap: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    IdleIdle,
    DrivenIdle,
    Ramsey,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Experiment::IdleIdle => "idle-idle",
            Experiment::DrivenIdle => "driven-idle",
            Experiment::Ramsey => "ramsey",
        })
    }
}

#[derive(Debug, Args)]
pub struct ZzArgs {
    /// Coupled pair from the device, e.g. 11,14.
    #[arg(long, conflicts_with_all = ["j", "d0", "d1", "detuning"])]
    pub pair: Option<String>,
    /// Coupling J in GHz.
    #[arg(long, requires_all = ["d0", "d1", "detuning"])]
    pub j: Option<f64>,
    /// Control anharmonicity magnitude in GHz.
    #[arg(long)]
    pub d0: Option<f64>,
    /// Target anharmonicity magnitude in GHz.
    #[arg(long)]
    pub d1: Option<f64>,
    /// Control minus target frequency in GHz.
    #[arg(long, allow_hyphen_values = true)]
    pub detuning: Option<f64>,
}

/// Run options; each may also come from `--config`, flags taking precedence.
#[derive(Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunArgs {
    /// TOML file with any of these options (snake_case keys).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// x2, x2pm, xy4, xy4pm, xy8 or xy8pm.
    #[arg(long)]
    pub sequence: Option<String>,
    /// standard, staggered, staggered-inv or none.
    #[arg(long)]
    pub mode: Option<String>,
    /// Delay sweep start:stop:step in dt, stop inclusive.
    #[arg(long)]
    pub delays: Option<String>,
    /// Qubit pairs a,b/c,d. For driven-idle the second pair is driven.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Clifford count per RB sequence.
    #[arg(long)]
    pub cliffords: Option<usize>,
    /// Over-rotation of every π pulse, radians.
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<f64>,
    /// continuous or pre-delay.
    #[arg(long)]
    pub zz_mode: Option<String>,
    /// on or off.
    #[arg(long)]
    pub relaxation: Option<String>,
    /// Ramsey frame detuning in kHz.
    #[arg(long)]
    pub detuning: Option<f64>,
    /// Ramsey qubit.
    #[arg(long)]
    pub qubit: Option<QubitId>,
    /// Ramsey spectator.
    #[arg(long)]
    pub spectator: Option<QubitId>,
    /// Override the Ramsey pair's ZZ strength, kHz.
    #[arg(long, allow_hyphen_values = true)]
    pub zz: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample this many shots per point instead of exact probabilities.
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Overwrite existing output files.
    #[arg(long)]
    #[serde(default)]
    pub force: bool,
}

impl RunArgs {
    fn merged(self, file: RunArgs) -> RunArgs {
        RunArgs {
            config: self.config,
            sequence: self.sequence.or(file.sequence),
            mode: self.mode.or(file.mode),
            delays: self.delays.or(file.delays),
            pairs: self.pairs.or(file.pairs),
            cliffords: self.cliffords.or(file.cliffords),
            epsilon: self.epsilon.or(file.epsilon),
            zz_mode: self.zz_mode.or(file.zz_mode),
            relaxation: self.relaxation.or(file.relaxation),
            detuning: self.detuning.or(file.detuning),
            qubit: self.qubit.or(file.qubit),
            spectator: self.spectator.or(file.spectator),
            zz: self.zz.or(file.zz),
            seed: self.seed.or(file.seed),
            shots: self.shots.or(file.shots),
            output_dir: self.output_dir.or(file.output_dir),
            force: self.force || file.force,
        }
    }
}

/// Fully resolved run settings, recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub device: String,
    #[serde(serialize_with = "display")]
    pub sequence: SequenceName,
    #[serde(serialize_with = "display_mode")]
    pub mode: Option<DDMode>,
    pub delays: Vec<u64>,
    pub pairs: Vec<(QubitId, QubitId)>,
    pub cliffords: usize,
    pub epsilon: f64,
    pub zz_mode: String,
    pub relaxation: bool,
    pub detuning: Option<f64>,
    pub qubit: QubitId,
    pub spectator: QubitId,
    pub zz: Option<f64>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub output_dir: PathBuf,
}

fn display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_mode<S: serde::Serializer>(v: &Option<DDMode>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(v.map_or("none", |m| m.as_str()))
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "error: {m}"),
            CliError::Failed(m) => write!(f, "failed: {m}"),
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        let invalid = matches!(
            e,
            ExperimentError::Config(_)
                | ExperimentError::Device(_)
                | ExperimentError::Circuit(CircuitError::Config(_))
                | ExperimentError::Dd(DdError::NotBipartite(_))
        );
        if invalid {
            CliError::Invalid(e.to_string())
        } else {
            CliError::Failed(e.to_string())
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

/// `start:stop:step`, stop inclusive.
pub fn parse_delays(text: &str) -> Result<Vec<u64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(format!("delays `{text}` must look like start:stop:step"));
    };
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| format!("bad delay value `{s}`"));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if step == 0 || start > stop {
        return Err(format!("delays `{text}` need step > 0 and start <= stop"));
    }
    Ok((start..=stop).step_by(step as usize).collect())
}

/// `a,b/c,d`.
pub fn parse_pairs(text: &str) -> Result<Vec<(QubitId, QubitId)>, String> {
    text.split('/')
        .map(|p| {
            let (a, b) = p.split_once(',').ok_or_else(|| format!("pair `{p}` must look like a,b"))?;
            let q = |s: &str| s.trim().parse::<QubitId>().map_err(|_| format!("bad qubit `{s}`"));
            Ok((q(a)?, q(b)?))
        })
        .collect()
}

fn load_device(path: Option<&Path>) -> Result<(DeviceModel, String), CliError> {
    match path {
        Some(p) => DeviceModel::from_path(p)
            .map(|d| (d, p.display().to_string()))
            .map_err(|e| invalid(format!("device {}: {e}", p.display()))),
        None => Ok((DeviceModel::bundled(), "bundled".into())),
    }
}

fn resolve(experiment: Experiment, args: RunArgs, device: String) -> Result<RunConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| invalid(format!("config {}: {e}", path.display())))?;
            toml::from_str::<RunArgs>(&text).map_err(|e| invalid(format!("config {}: {e}", path.display())))?
        }
        None => RunArgs::default(),
    };
    let a = args.merged(file);

    let sequence: SequenceName = a.sequence.as_deref().unwrap_or("x2pm").parse().map_err(invalid)?;
    let mode = match a.mode.as_deref().unwrap_or("staggered") {
        "none" => None,
        m => Some(m.parse::<DDMode>().map_err(invalid)?),
    };
    let default_delays = match experiment {
        Experiment::Ramsey => "0:200000:4000",
        _ => "1280:14080:1280",
    };
    let delays = parse_delays(a.delays.as_deref().unwrap_or(default_delays)).map_err(invalid)?;
    let pairs = parse_pairs(a.pairs.as_deref().unwrap_or("11,14/12,13")).map_err(invalid)?;
    if experiment != Experiment::Ramsey && pairs.len() != 2 {
        return Err(invalid(format!("{experiment} needs exactly two pairs")));
    }
    let zz_mode: ZzMode = a.zz_mode.as_deref().unwrap_or("continuous").parse().map_err(invalid)?;
    let relaxation = match a.relaxation.as_deref().unwrap_or("on") {
        "on" => true,
        "off" => false,
        other => return Err(invalid(format!("--relaxation must be on or off, got `{other}`"))),
    };
    let epsilon = a.epsilon.unwrap_or(0.0);
    if epsilon.is_nan() || epsilon.abs() >= std::f64::consts::FRAC_PI_2 {
        return Err(invalid("--epsilon must lie strictly within ±π/2"));
    }
    let stochastic = experiment != Experiment::Ramsey || a.shots.is_some();
    if stochastic && a.seed.is_none() {
        return Err(invalid(format!("{experiment} needs --seed")));
    }
    if experiment == Experiment::Ramsey && a.detuning.is_none() {
        return Err(invalid("ramsey needs --detuning <kHz>"));
    }
    Ok(RunConfig {
        experiment,
        device,
        sequence,
        mode,
        delays,
        pairs,
        cliffords: a.cliffords.unwrap_or(8),
        epsilon,
        zz_mode: zz_mode.to_string(),
        relaxation,
        detuning: a.detuning,
        qubit: a.qubit.unwrap_or(14),
        spectator: a.spectator.unwrap_or(13),
        zz: a.zz,
        seed: a.seed,
        shots: a.shots,
        output_dir: a.output_dir.unwrap_or_else(|| PathBuf::from("results")),
    })
}

fn noise_for(cfg: &RunConfig, device: &DeviceModel, qubits: &[QubitId]) -> NoiseConfig {
    let mut noise = NoiseConfig::from_device(device, qubits).with_relaxation(cfg.relaxation);
    noise.overrotation_epsilon = cfg.epsilon;
    noise.zz_mode = cfg.zz_mode.parse().expect("validated");
    noise
}

fn plan_for(cfg: &RunConfig, device: &DeviceModel, qubits: &[QubitId]) -> Result<Option<DDPlan>, CliError> {
    cfg.mode
        .map(|m| DDPlan::build(m, DDSequence::new(cfg.sequence), qubits, device))
        .transpose()
        .map_err(|e| invalid(e.to_string()))
}

fn rb_config(cfg: &RunConfig, pair: (QubitId, QubitId), seed: u64) -> RBConfig {
    RBConfig {
        qubit_pair: pair,
        n_cliffords: cfg.cliffords,
        delays_2tau: cfg.delays.clone(),
        seed,
    }
}

fn fit_or_skip(result: &ExperimentResult, model: FitModel) -> Result<Option<FitResult>, CliError> {
    match fit_curve(result, model) {
        Ok(f) => Ok(Some(f)),
        Err(e @ (FitError::TooFewPoints { .. } | FitError::Degenerate(_))) => {
            eprintln!("note: no {model} fit for {}: {e}", label(result));
            Ok(None)
        }
        Err(e) => Err(CliError::Failed(format!("{}: {e}", label(result)))),
    }
}

fn label(r: &ExperimentResult) -> String {
    format!("{} {}-{} {} {}", r.experiment, r.pair.0, r.pair.1, r.sequence, r.mode)
}

/// Simulate the configured experiment; no files are touched.
pub type LabelledFits = Vec<(String, FitResult)>;

/// Fits are labelled with their result's pair, sequence and mode.
pub fn execute(
    cfg: &RunConfig,
    device: &DeviceModel,
) -> Result<(Vec<ExperimentResult>, LabelledFits), CliError> {
    let seed = cfg.seed.unwrap_or(0);
    let (mut results, model) = match cfg.experiment {
        Experiment::IdleIdle => {
            let (a, b) = (cfg.pairs[0], cfg.pairs[1]);
            let qubits = [a.0, a.1, b.0, b.1];
            let noise = noise_for(cfg, device, &qubits);
            let plan = plan_for(cfg, device, &qubits)?;
            let (ra, rb) = run_idle_idle(
                &rb_config(cfg, a, seed),
                &rb_config(cfg, b, seed.wrapping_add(1)),
                plan.as_ref(),
                device,
                &noise,
            )?;
            (vec![ra, rb], FitModel::ExpDecay)
        }
        Experiment::DrivenIdle => {
            let (a, b) = (cfg.pairs[0], cfg.pairs[1]);
            let noise = noise_for(cfg, device, &[a.0, a.1, b.0, b.1]);
            let plan = plan_for(cfg, device, &[a.0, a.1])?;
            let config = DrivenIdleConfig {
                rb: rb_config(cfg, a, seed),
                driven_pair: b,
            };
            (vec![run_driven_idle(&config, plan.as_ref(), device, &noise)?], FitModel::ExpDecay)
        }
        Experiment::Ramsey => {
            let qubits = [cfg.qubit, cfg.spectator];
            let mut noise = noise_for(cfg, device, &qubits);
            if let Some(nu) = cfg.zz {
                noise = noise.with_zz(cfg.qubit, cfg.spectator, nu);
            }
            let plan = plan_for(cfg, device, &qubits)?;
            let mut rc = RamseyConfig::new(cfg.qubit, cfg.spectator, cfg.detuning.expect("validated"));
            rc.delays = cfg.delays.clone();
            (vec![run_ramsey(&rc, plan.as_ref(), device, &noise)?], FitModel::DampedCosine)
        }
    };
    if let Some(shots) = cfg.shots {
        for (i, r) in results.iter_mut().enumerate() {
            sample_shots(r, shots, seed.wrapping_add(i as u64))?;
        }
    }
    let mut fits = Vec::new();
    for r in &results {
        if let Some(f) = fit_or_skip(r, model)? {
            fits.push((label(r), f));
        }
    }
    Ok((results, fits))
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    seed: Option<u64>,
    config: &'a RunConfig,
    outputs: [&'static str; 2],
}

fn write_outputs(
    cfg: &RunConfig,
    results: &[ExperimentResult],
    fits: &[(String, FitResult)],
    force: bool,
) -> Result<(), CliError> {
    let dir = &cfg.output_dir;
    let targets = [RESULTS_FILE, FITS_FILE, MANIFEST_FILE].map(|f| dir.join(f));
    if !force {
        if let Some(existing) = targets.iter().find(|p| p.exists()) {
            return Err(invalid(format!("{} exists; pass --force to overwrite", existing.display())));
        }
    }
    fs::create_dir_all(dir).map_err(|e| CliError::Failed(format!("{}: {e}", dir.display())))?;
    let create = |p: &Path| {
        File::create(p)
            .map(BufWriter::new)
            .map_err(|e| CliError::Failed(format!("{}: {e}", p.display())))
    };
    write_results_csv(create(&targets[0])?, results)?;
    write_fit_csv(create(&targets[1])?, fits)?;
    let manifest = Manifest {
        tool: "stagger-dd",
        version: env!("CARGO_PKG_VERSION"),
        seed: cfg.seed,
        config: cfg,
        outputs: [RESULTS_FILE, FITS_FILE],
    };
    serde_json::to_writer_pretty(create(&targets[2])?, &manifest).map_err(|e| CliError::Failed(e.to_string()))?;
    Ok(())
}

fn cmd_run(experiment: Experiment, args: RunArgs, device_path: Option<&Path>) -> Result<(), CliError> {
    let force = args.force;
    let (device, device_label) = load_device(device_path)?;
    let cfg = resolve(experiment, args, device_label)?;
    let (results, fits) = execute(&cfg, &device)?;
    write_outputs(&cfg, &results, &fits, force)?;
    for r in &results {
        match time_avg_fidelity(r) {
            Ok(f) => println!("{}: F_avg = {f:.4}", label(r)),
            Err(_) => println!("{}: {} points", label(r), r.len()),
        }
    }
    for (name, f) in &fits {
        match f.model {
            FitModel::DampedCosine if f.decay_time_us.is_finite() => {
                println!("{name}: {} f = {:.3} kHz, T = {:.1} us", f.model, f.rate_or_freq, f.decay_time_us)
            }
            FitModel::DampedCosine => {
                println!("{name}: {} f = {:.3} kHz, no resolvable decay", f.model, f.rate_or_freq)
            }
            FitModel::ExpDecay => println!(
                "{name}: {} rate = {:.4} /us, A = {:.4}, B = {:.4}",
                f.model, f.rate_or_freq, f.amplitude, f.offset
            ),
        }
    }
    println!("wrote {}", cfg.output_dir.display());
    Ok(())
}

fn cmd_zz(args: ZzArgs, device_path: Option<&Path>) -> Result<(), CliError> {
    let zz = match (&args.pair, args.j) {
        (Some(pair), _) => {
            let (device, _) = load_device(device_path)?;
            let pairs = parse_pairs(pair).map_err(invalid)?;
            let [(a, b)] = pairs[..] else {
                return Err(invalid("--pair takes a single pair"));
            };
            let c = device
                .coupling(a, b)
                .ok_or_else(|| invalid(format!("qubits {a} and {b} are not coupled")))?;
            let zz = device.derived_zz(c).map_err(|e| invalid(e.to_string()))?;
            if let Some(t) = c.zz_strength {
                println!("tabulated {t} kHz");
            }
            zz
        }
        (None, Some(j)) => compute_zz(
            j,
            args.d0.expect("clap requires"),
            args.d1.expect("clap requires"),
            args.detuning.expect("clap requires"),
        )
        .map_err(|e| invalid(e.to_string()))?,
        (None, None) => return Err(invalid("give --pair or all of --j --d0 --d1 --detuning")),
    };
    println!("{zz:.4} kHz");
    Ok(())
}

fn cmd_pass(args: PassArgs, device_path: Option<&Path>) -> Result<(), CliError> {
    let source = if args.input.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(&args.input)
    }
    .map_err(|e| invalid(format!("{}: {e}", args.input.display())))?;
    let circuit = parse_text(&source).map_err(|e| invalid(e.to_string()))?;
    let (device, _) = load_device(device_path)?;
    let scheduled = if args.asap {
        schedule_asap(&circuit, &device)
    } else {
        schedule_alap(&circuit, &device)
    }
    .map_err(|e| invalid(e.to_string()))?;
    let sequence = DDSequence::new(args.sequence.parse().map_err(invalid)?);
    let out = match args.mode.as_str() {
        "none" => scheduled,
        m => {
            let mode: DDMode = m.parse().map_err(invalid)?;
            let plan = DDPlan::build(mode, sequence, scheduled.qubits(), &device).map_err(|e| invalid(e.to_string()))?;
            let (out, report) = insert_dd(&scheduled, &plan, &device).map_err(|e| CliError::Failed(e.to_string()))?;
            eprintln!(
                "filled {} window(s), skipped {}, max placement error {:.3} dt",
                report.filled.len(),
                report.skipped.len(),
                report.max_placement_error
            );
            out
        }
    };
    print!("{}", emit_text(out.qubits(), out.instructions()));
    Ok(())
}

fn cmd_verify(device_path: Option<&Path>) -> Result<(), CliError> {
    let mut ok = true;
    let report = algebra::run_suite(1000, 0);
    for (name, dev) in report.rows() {
        let pass = dev < 1e-10;
        ok &= pass;
        println!("{:<4} {name}: max deviation {dev:.2e}", if pass { "ok" } else { "FAIL" });
    }
    for name in SequenceName::ALL {
        let pass = DDSequence::new(name).verify_identity();
        ok &= pass;
        println!("{:<4} {name} composes to identity", if pass { "ok" } else { "FAIL" });
    }

    let (device, _) = load_device(device_path)?;
    let device = device.with_instantaneous_gates();
    let Some(c) = device.couplings.first() else {
        return Err(invalid("device has no couplings"));
    };
    let (a, b) = (c.control, c.target);
    let nu = device.zz_strength(a, b).unwrap_or(0.0);
    let mut circuit = crate::circuit::Circuit::new(vec![a, b]);
    circuit.barrier(&[a, b]).delay(&[a, b], 14080).barrier(&[a, b]);
    let scheduled = schedule_alap(&circuit, &device).map_err(|e| CliError::Failed(e.to_string()))?;
    let plan = DDPlan::staggered(DDSequence::new(SequenceName::X2), &[a, b], &device).map_err(|e| invalid(e.to_string()))?;
    let (dd, _) = insert_dd(&scheduled, &plan, &device).map_err(|e| CliError::Failed(e.to_string()))?;
    let initial = DensityMatrix::product(&[plus(), plus()]).map_err(|e| CliError::Failed(e.to_string()))?;
    let target: Vec<_> = (0..4).map(|i| plus()[i >> 1] * plus()[i & 1]).collect();
    let noise = NoiseConfig::noiseless().with_zz(a, b, nu);
    let fid = simulate(&dd, &device, &noise, &initial)
        .map_err(|e| CliError::Failed(e.to_string()))?
        .fidelity_with_pure(&target);
    let pass = (1.0 - fid).abs() < 1e-9;
    ok &= pass;
    println!(
        "{:<4} staggered X2 cancels {nu} kHz ZZ on ({a},{b}): fidelity {fid:.12}",
        if pass { "ok" } else { "FAIL" }
    );
    if ok {
        Ok(())
    } else {
        Err(CliError::Failed("verification failed".into()))
    }
}

/// Parse `argv` and run; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let device = cli.device.as_deref();
    let outcome = match cli.command {
        Command::ZzCalc(args) => cmd_zz(args, device),
        Command::Run { experiment, args } => cmd_run(experiment, *args, device),
        Command::Pass(args) => cmd_pass(args, device),
        Command::Verify => cmd_verify(device),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delay_ranges() {
        assert_eq!(parse_delays("1280:3840:1280").unwrap(), vec![1280, 2560, 3840]);
        assert_eq!(parse_delays("0:10:4").unwrap(), vec![0, 4, 8]);
        assert!(parse_delays("5:1:1").is_err());
        assert!(parse_delays("1:5:0").is_err());
        assert!(parse_delays("1:5").is_err());
    }

    #[test]
    fn pair_lists() {
        assert_eq!(parse_pairs("11,14/12,13").unwrap(), vec![(11, 14), (12, 13)]);
        assert!(parse_pairs("11-14").is_err());
    }

    #[test]
    fn flags_override_config_file() {
        let file: RunArgs = toml::from_str("seed = 3\nmode = \"standard\"\ndelays = \"0:8:4\"").unwrap();
        let flags = RunArgs {
            seed: Some(9),
            ..Default::default()
        };
        let m = flags.merged(file);
        assert_eq!(m.seed, Some(9));
        assert_eq!(m.mode.as_deref(), Some("standard"));
        assert!(toml::from_str::<RunArgs>("colour = 1").is_err());
    }

    #[test]
    fn ramsey_requires_detuning() {
        let r = resolve(Experiment::Ramsey, RunArgs::default(), "bundled".into());
        assert!(matches!(r, Err(CliError::Invalid(_))));
        let r = resolve(Experiment::IdleIdle, RunArgs::default(), "bundled".into());
        assert!(matches!(r, Err(CliError::Invalid(m)) if m.contains("--seed")));
    }
}
