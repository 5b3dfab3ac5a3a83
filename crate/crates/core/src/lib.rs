// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! # `stagger-dd`
//!
//! Scheduling and simulation of dynamical decoupling on small transmon
//! registers with always-on ZZ coupling.
//!
//! ```rust
//! use stagger_dd::circuit::{schedule_alap, Circuit};
//! use stagger_dd::dd::{insert_dd, DDPlan, DDSequence, SequenceName};
//! use stagger_dd::device::DeviceModel;
//! use stagger_dd::sim::{plus, simulate, DensityMatrix, NoiseConfig};
//!
//! let device = DeviceModel::bundled().with_instantaneous_gates();
//! let mut idle = Circuit::new(vec![11, 14]);
//! idle.barrier(&[11, 14]).delay(&[11], 2560).delay(&[14], 2560).barrier(&[11, 14]);
//! let idle = schedule_alap(&idle, &device).unwrap();
//!
//! let plan = DDPlan::staggered(DDSequence::new(SequenceName::X2), &[11, 14], &device).unwrap();
//! let (dd, _) = insert_dd(&idle, &plan, &device).unwrap();
//!
//! let noise = NoiseConfig::noiseless().with_zz(11, 14, 46.79);
//! let start = DensityMatrix::product(&[plus(), plus()]).unwrap();
//! let end = simulate(&dd, &device, &noise, &start).unwrap();
//! assert!(end.trace_distance(&start) < 1e-9);
//! ```
//!
//! The modules follow the pipeline: [`device`] parameters and ZZ strengths,
//! the [`circuit`] IR and schedulers, the [`dd`] pass, the [`sim`] noise
//! model, and [`experiments`] that sweep idle time and fit the results.
//! The [`cli`] module backs the `stagger-dd` binary.

pub mod circuit;
pub mod cli;
pub mod clifford;
pub mod dd;
pub mod device;
pub mod experiments;
pub mod linalg;
pub mod sim;

// The guide under book/ is compiled here so its listings stay in sync.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/zz-crosstalk.md")]
    mod zz_crosstalk {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/decoupling.md")]
    mod decoupling {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
