// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::circuit::{resolve_duration, schedule_alap, Circuit, GateKind, ScheduledCircuit};
use crate::clifford::{CliffordGate, CliffordGroup, Tableau};
use crate::dd::{insert_dd, DDPlan};
use crate::device::{DeviceModel, QubitId};
use crate::linalg::CMat;
use crate::sim::{pair_key, simulate, DensityMatrix, NoiseConfig};

use super::{check_delays, plan_labels, ExperimentError, ExperimentResult, RBConfig};

/// Random Clifford indices into [`CliffordGroup::two_qubit`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RbSequence {
    pub cliffords: Vec<usize>,
}

impl RbSequence {
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let group = CliffordGroup::two_qubit();
        RbSequence {
            cliffords: (0..n).map(|_| group.sample(rng)).collect(),
        }
    }

    pub fn from_indices(cliffords: Vec<usize>) -> Self {
        RbSequence { cliffords }
    }

    /// Product of all Cliffords, last applied outermost.
    pub fn composite(&self) -> Tableau {
        let group = CliffordGroup::two_qubit();
        self.cliffords
            .iter()
            .fold(Tableau::identity(), |acc, &i| group.element(i).compose(&acc))
    }

    pub fn inverse_word(&self) -> &'static [CliffordGate] {
        CliffordGroup::two_qubit().synthesize(&self.composite().inverse())
    }

    fn words(&self) -> impl Iterator<Item = &'static [CliffordGate]> + '_ {
        let group = CliffordGroup::two_qubit();
        self.cliffords.iter().map(move |&i| group.word(i))
    }
}

/// Pair ordered as (native control, target).
fn native_order(device: &DeviceModel, pair: (QubitId, QubitId)) -> Result<[QubitId; 2], ExperimentError> {
    let c = device
        .coupling(pair.0, pair.1)
        .ok_or_else(|| ExperimentError::Config(format!("qubits {} and {} are not coupled", pair.0, pair.1)))?;
    Ok([c.control, c.target])
}

fn push_word(c: &mut Circuit, word: &[CliffordGate], phys: [QubitId; 2]) {
    for g in word {
        match *g {
            CliffordGate::H(l) => c.gate(GateKind::H, &[phys[l as usize]]),
            CliffordGate::S(l) => c.gate(GateKind::RZ(FRAC_PI_2), &[phys[l as usize]]),
            CliffordGate::CX => c.gate(GateKind::CX, &phys),
        };
    }
}

fn push_idle(c: &mut Circuit, qubits: &[QubitId], delay: u64) {
    c.barrier(qubits);
    if delay > 0 {
        c.delay(qubits, delay);
    }
    c.barrier(qubits);
}

fn rb_body(seq: &RbSequence, phys: [QubitId; 2], delay: u64) -> Circuit {
    let mut c = Circuit::new(phys.to_vec());
    for word in seq.words() {
        push_word(&mut c, word, phys);
        push_idle(&mut c, &phys, delay);
    }
    push_word(&mut c, seq.inverse_word(), phys);
    c
}

/// One RB circuit: every Clifford followed by a barrier-bounded idle period
/// of `delay` dt, then the inverting Clifford and measurement.
pub fn rb_circuit(
    seq: &RbSequence,
    pair: (QubitId, QubitId),
    delay: u64,
    device: &DeviceModel,
) -> Result<ScheduledCircuit, ExperimentError> {
    let phys = native_order(device, pair)?;
    let mut c = rb_body(seq, phys, delay);
    c.gate(GateKind::Measure, &[phys[0]]).gate(GateKind::Measure, &[phys[1]]);
    Ok(schedule_alap(&c, device)?)
}

/// RB circuits for every delay in the sweep, sharing one Clifford sequence.
pub fn gen_rb_circuit(config: &RBConfig, device: &DeviceModel) -> Result<Vec<ScheduledCircuit>, ExperimentError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let seq = RbSequence::sample(config.n_cliffords, &mut rng);
    config
        .delays_2tau
        .iter()
        .map(|&d| rb_circuit(&seq, config.qubit_pair, d, device))
        .collect()
}

fn run_points(
    circuits: &[ScheduledCircuit],
    plan: Option<&DDPlan>,
    device: &DeviceModel,
    noise: &NoiseConfig,
    readouts: &[[QubitId; 2]],
) -> Result<Vec<Vec<f64>>, ExperimentError> {
    circuits
        .par_iter()
        .map(|circuit| {
            let circuit = match plan {
                Some(p) => insert_dd(circuit, p, device)?.0,
                None => circuit.clone(),
            };
            let rho = simulate(&circuit, device, noise, &DensityMatrix::zero(circuit.num_qubits())?)?;
            readouts
                .iter()
                .map(|pair| {
                    let outcome: Vec<(usize, u8)> = pair
                        .iter()
                        .map(|q| {
                            circuit
                                .position(*q)
                                .map(|p| (p, 0))
                                .ok_or_else(|| ExperimentError::Config(format!("qubit {q} not in circuit")))
                        })
                        .collect::<Result<_, _>>()?;
                    Ok(rho.marginal_population(&outcome).clamp(0.0, 1.0))
                })
                .collect()
        })
        .collect()
}

fn result(
    experiment: &str,
    plan: Option<&DDPlan>,
    config: &RBConfig,
    device: &DeviceModel,
    fidelity: Vec<f64>,
) -> ExperimentResult {
    let (sequence, mode) = plan_labels(plan);
    ExperimentResult {
        experiment: experiment.into(),
        sequence,
        mode,
        pair: config.qubit_pair,
        delays: config.delays_2tau.clone(),
        fidelity,
        seed: config.seed,
        dt: device.dt,
    }
}

/// Isolated two-qubit RB with optional DD in the idle periods.
pub fn run_rb(
    config: &RBConfig,
    plan: Option<&DDPlan>,
    device: &DeviceModel,
    noise: &NoiseConfig,
) -> Result<ExperimentResult, ExperimentError> {
    let circuits = gen_rb_circuit(config, device)?;
    let phys = native_order(device, config.qubit_pair)?;
    let f = run_points(&circuits, plan, device, noise, &[phys])?;
    Ok(result("rb", plan, config, device, f.into_iter().map(|v| v[0]).collect()))
}

fn disjoint(a: (QubitId, QubitId), b: (QubitId, QubitId)) -> bool {
    a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1
}

fn linked(noise: &NoiseConfig, a: (QubitId, QubitId), b: (QubitId, QubitId)) -> bool {
    [a.0, a.1]
        .iter()
        .any(|&x| [b.0, b.1].iter().any(|&y| noise.zz_pairs.contains_key(&pair_key(x, y))))
}

/// Simultaneous RB on two pairs with idle periods aligned across all four
/// qubits. Each pair draws its Cliffords from its own seed.
pub fn run_idle_idle(
    pair_a: &RBConfig,
    pair_b: &RBConfig,
    plan: Option<&DDPlan>,
    device: &DeviceModel,
    noise: &NoiseConfig,
) -> Result<(ExperimentResult, ExperimentResult), ExperimentError> {
    pair_a.validate()?;
    pair_b.validate()?;
    if !disjoint(pair_a.qubit_pair, pair_b.qubit_pair) {
        return Err(ExperimentError::Config("RB pairs overlap".into()));
    }
    if pair_a.delays_2tau != pair_b.delays_2tau || pair_a.n_cliffords != pair_b.n_cliffords {
        return Err(ExperimentError::Config(
            "simultaneous RB needs the same delays and Clifford count on both pairs".into(),
        ));
    }
    if !linked(noise, pair_a.qubit_pair, pair_b.qubit_pair) {
        return Err(ExperimentError::Config("no ZZ coupling configured between the pairs".into()));
    }
    let pa = native_order(device, pair_a.qubit_pair)?;
    let pb = native_order(device, pair_b.qubit_pair)?;
    let seq_a = RbSequence::sample(pair_a.n_cliffords, &mut ChaCha8Rng::seed_from_u64(pair_a.seed));
    let seq_b = RbSequence::sample(pair_b.n_cliffords, &mut ChaCha8Rng::seed_from_u64(pair_b.seed));
    let all = [pa[0], pa[1], pb[0], pb[1]];
    let circuits = pair_a
        .delays_2tau
        .iter()
        .map(|&delay| {
            let mut c = Circuit::new(all.to_vec());
            for (wa, wb) in seq_a.words().zip(seq_b.words()) {
                push_word(&mut c, wa, pa);
                push_word(&mut c, wb, pb);
                push_idle(&mut c, &all, delay);
            }
            push_word(&mut c, seq_a.inverse_word(), pa);
            push_word(&mut c, seq_b.inverse_word(), pb);
            for q in all {
                c.gate(GateKind::Measure, &[q]);
            }
            Ok(schedule_alap(&c, device)?)
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let f = run_points(&circuits, plan, device, noise, &[pa, pb])?;
    let (fa, fb): (Vec<f64>, Vec<f64>) = f.into_iter().map(|v| (v[0], v[1])).unzip();
    Ok((
        result("idle-idle", plan, pair_a, device, fa),
        result("idle-idle", plan, pair_b, device, fb),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrivenIdleConfig {
    pub rb: RBConfig,
    /// Neighbouring pair running random two-qubit unitaries throughout.
    pub driven_pair: (QubitId, QubitId),
}

/// Haar-random 4×4 unitary with unit determinant.
pub fn haar_su4<R: Rng + ?Sized>(rng: &mut R) -> CMat {
    let g = DMatrix::from_fn(4, 4, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(4, 4, |i, j| {
        if i == j {
            let d = r[(i, i)];
            d / d.norm()
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let u = q * phases;
    let det = u.determinant();
    u * Complex64::from_polar(1.0, -det.arg() / 4.0)
}

/// RB on one pair while the neighbouring pair runs back-to-back random
/// SU(4) blocks for the same total duration. DD, if any, should cover the
/// RB pair only.
pub fn run_driven_idle(
    config: &DrivenIdleConfig,
    plan: Option<&DDPlan>,
    device: &DeviceModel,
    noise: &NoiseConfig,
) -> Result<ExperimentResult, ExperimentError> {
    let rb = &config.rb;
    rb.validate()?;
    check_delays(&rb.delays_2tau)?;
    if !disjoint(rb.qubit_pair, config.driven_pair) {
        return Err(ExperimentError::Config("RB pair and driven pair overlap".into()));
    }
    if !linked(noise, rb.qubit_pair, config.driven_pair) {
        return Err(ExperimentError::Config("no ZZ coupling configured between the pairs".into()));
    }
    let pa = native_order(device, rb.qubit_pair)?;
    let pb = native_order(device, config.driven_pair)?;
    let block = resolve_duration(&GateKind::Unitary(crate::linalg::identity(4)), &pb, device)?;
    if block == 0 {
        return Err(ExperimentError::Config("SU(4) block has zero duration".into()));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rb.seed);
    let seq = RbSequence::sample(rb.n_cliffords, &mut rng);
    let bodies: Vec<Circuit> = rb.delays_2tau.iter().map(|&d| rb_body(&seq, pa, d)).collect();
    let lengths: Vec<u64> = bodies
        .iter()
        .map(|b| Ok(schedule_alap(b, device)?.total_duration()))
        .collect::<Result<_, ExperimentError>>()?;
    let max_blocks = lengths.iter().copied().max().unwrap_or(0) / block;
    let blocks: Vec<CMat> = (0..max_blocks).map(|_| haar_su4(&mut rng)).collect();

    let circuits = bodies
        .into_iter()
        .zip(&lengths)
        .map(|(body, &len)| {
            let count = (len / block) as usize;
            let mut c = Circuit::new(vec![pa[0], pa[1], pb[0], pb[1]]);
            c.instructions = body.instructions;
            for u in &blocks[..count] {
                c.gate(GateKind::Unitary(u.clone()), &pb);
            }
            let pad = len - count as u64 * block;
            if pad > 0 {
                c.delay(&pb, pad);
            }
            c.gate(GateKind::Measure, &[pa[0]]).gate(GateKind::Measure, &[pa[1]]);
            Ok(schedule_alap(&c, device)?)
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    let f = run_points(&circuits, plan, device, noise, &[pa])?;
    Ok(result("driven-idle", plan, rb, device, f.into_iter().map(|v| v[0]).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_unitary, max_abs_diff};

    #[test]
    fn noiseless_rb_returns_home() {
        let device = DeviceModel::bundled();
        let mut cfg = RBConfig::new((11, 14), 3);
        cfg.delays_2tau = vec![1280, 6400];
        let r = run_rb(&cfg, None, &device, &NoiseConfig::noiseless()).unwrap();
        for f in r.fidelity {
            assert!((f - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_clifford_gives_pure_delay() {
        let device = DeviceModel::bundled();
        let group = CliffordGroup::two_qubit();
        let id = group.index_of(&Tableau::identity()).unwrap();
        let seq = RbSequence::from_indices(vec![id]);
        assert!(seq.inverse_word().is_empty());
        let c = rb_circuit(&seq, (14, 11), 1280, &device).unwrap();
        assert!(c
            .instructions()
            .iter()
            .all(|i| matches!(i.kind, GateKind::Barrier | GateKind::Delay(_) | GateKind::Measure)));
        assert_eq!(c.total_duration(), 1280);
    }

    #[test]
    fn same_seed_same_circuits() {
        let device = DeviceModel::bundled();
        let cfg = RBConfig::new((12, 13), 42);
        assert_eq!(gen_rb_circuit(&cfg, &device).unwrap(), gen_rb_circuit(&cfg, &device).unwrap());
        let other = RBConfig { seed: 43, ..cfg.clone() };
        assert_ne!(gen_rb_circuit(&cfg, &device).unwrap(), gen_rb_circuit(&other, &device).unwrap());
    }

    #[test]
    fn uncoupled_pair_rejected() {
        let cfg = RBConfig::new((11, 12), 1);
        assert!(matches!(
            gen_rb_circuit(&cfg, &DeviceModel::bundled()),
            Err(ExperimentError::Config(_))
        ));
    }

    #[test]
    fn haar_blocks_are_special_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = haar_su4(&mut rng);
        assert!(is_unitary(&u, 1e-12));
        assert!((u.determinant() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let v = haar_su4(&mut rng);
        assert!(max_abs_diff(&u, &v) > 1e-3);
    }

    #[test]
    fn overlapping_pairs_rejected() {
        let device = DeviceModel::bundled();
        let noise = NoiseConfig::from_device(&device, &[11, 14, 13]);
        let a = RBConfig::new((11, 14), 1);
        let b = RBConfig::new((14, 13), 2);
        assert!(run_idle_idle(&a, &b, None, &device, &noise).is_err());
    }
}
