// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Dynamical-decoupling sequences and the pass that places them into idle
//! windows with standard, staggered or inverse-staggered timing.
//!
//! In the staggered arrangement neighbouring qubits alternate roles: one
//! qubit pulses symmetrically inside the window while its neighbour pulses
//! halfway between, so every ZZ term sees its sign flipped once per
//! sub-interval and the accumulated conditional phase cancels.

pub mod algebra;
mod insert;
mod sequence;
mod timing;

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::device::{DeviceModel, QubitId};

pub use insert::{insert_dd, InsertionReport};
pub use sequence::{sequence_unitary, verify_identity, DDSequence, SequenceName};
pub use timing::{placement_error, pulse_centers, pulse_times, StaggerRole};

#[derive(Debug, Error, PartialEq)]
pub enum DdError {
    #[error("window of {window} dt cannot hold {pulses} pulses of {gate_duration} dt")]
    WindowTooShort {
        window: u64,
        pulses: usize,
        gate_duration: u64,
    },
    #[error("coupling graph over {0:?} is not two-colourable; staggered roles are ambiguous")]
    NotBipartite(Vec<QubitId>),
    #[error(transparent)]
    Circuit(#[from] crate::circuit::CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DDMode {
    Standard,
    Staggered,
    StaggeredInverse,
}

impl DDMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DDMode::Standard => "standard",
            DDMode::Staggered => "staggered",
            DDMode::StaggeredInverse => "staggered-inv",
        }
    }
}

impl fmt::Display for DDMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DDMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(DDMode::Standard),
            "staggered" | "stag" => Ok(DDMode::Staggered),
            "staggered-inv" | "staggered-inverse" | "stag-inv" => Ok(DDMode::StaggeredInverse),
            other => Err(format!("unknown DD mode `{other}`")),
        }
    }
}

/// Which sequence goes on which qubit, with what timing.
#[derive(Debug, Clone, PartialEq)]
pub struct DDPlan {
    pub sequence: DDSequence,
    pub mode: DDMode,
    pub role_assignment: BTreeMap<QubitId, StaggerRole>,
}

impl DDPlan {
    /// Symmetric timing on every listed qubit.
    pub fn standard(sequence: DDSequence, qubits: &[QubitId]) -> Self {
        DDPlan {
            sequence,
            mode: DDMode::Standard,
            role_assignment: qubits.iter().map(|&q| (q, StaggerRole::Symmetric)).collect(),
        }
    }

    /// Alternating roles along the device coupling graph restricted to
    /// `qubits`: each connected component is two-coloured starting from its
    /// lowest-indexed qubit, which is symmetric. For a single coupled pair
    /// this makes the lower index symmetric and the other staggered.
    pub fn staggered(sequence: DDSequence, qubits: &[QubitId], device: &DeviceModel) -> Result<Self, DdError> {
        let mut sorted = qubits.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut roles: BTreeMap<QubitId, StaggerRole> = BTreeMap::new();
        for &root in &sorted {
            if roles.contains_key(&root) {
                continue;
            }
            roles.insert(root, StaggerRole::Symmetric);
            let mut queue = VecDeque::from([root]);
            while let Some(q) = queue.pop_front() {
                let role = roles[&q];
                for &n in sorted.iter().filter(|&&n| n != q && device.coupling(q, n).is_some()) {
                    match roles.get(&n) {
                        None => {
                            roles.insert(n, role.swapped());
                            queue.push_back(n);
                        }
                        Some(r) if *r == role => return Err(DdError::NotBipartite(sorted.clone())),
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(DDPlan {
            sequence,
            mode: DDMode::Staggered,
            role_assignment: roles,
        })
    }

    /// Staggered plan with every role swapped.
    pub fn staggered_inverse(sequence: DDSequence, qubits: &[QubitId], device: &DeviceModel) -> Result<Self, DdError> {
        let mut plan = Self::staggered(sequence, qubits, device)?;
        plan.mode = DDMode::StaggeredInverse;
        for role in plan.role_assignment.values_mut() {
            *role = role.swapped();
        }
        Ok(plan)
    }

    pub fn build(mode: DDMode, sequence: DDSequence, qubits: &[QubitId], device: &DeviceModel) -> Result<Self, DdError> {
        match mode {
            DDMode::Standard => Ok(Self::standard(sequence, qubits)),
            DDMode::Staggered => Self::staggered(sequence, qubits, device),
            DDMode::StaggeredInverse => Self::staggered_inverse(sequence, qubits, device),
        }
    }

    pub fn role(&self, qubit: QubitId) -> Option<StaggerRole> {
        self.role_assignment.get(&qubit).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2pm() -> DDSequence {
        DDSequence::new(SequenceName::X2pm)
    }

    #[test]
    fn standard_is_all_symmetric() {
        let p = DDPlan::standard(x2pm(), &[11, 14]);
        assert!(p.role_assignment.values().all(|r| *r == StaggerRole::Symmetric));
    }

    #[test]
    fn single_pair_lower_index_symmetric() {
        let d = DeviceModel::bundled();
        let p = DDPlan::staggered(x2pm(), &[14, 11], &d).unwrap();
        assert_eq!(p.role(11), Some(StaggerRole::Symmetric));
        assert_eq!(p.role(14), Some(StaggerRole::Staggered));
        let inv = DDPlan::staggered_inverse(x2pm(), &[14, 11], &d).unwrap();
        assert_eq!(inv.role(11), Some(StaggerRole::Staggered));
        assert_eq!(inv.role(14), Some(StaggerRole::Symmetric));
    }

    #[test]
    fn chain_of_two_pairs_alternates() {
        // 11-14-13-12 is a path in the coupling graph
        let d = DeviceModel::bundled();
        let p = DDPlan::staggered(x2pm(), &[11, 14, 12, 13], &d).unwrap();
        for (a, b) in [(11, 14), (14, 13), (13, 12)] {
            assert_ne!(p.role(a), p.role(b), "{a}-{b}");
        }
        assert_eq!(p.role(11), Some(StaggerRole::Symmetric));
    }

    #[test]
    fn odd_cycle_rejected() {
        let mut d = DeviceModel::bundled();
        d.couplings.push(crate::device::CouplingProps {
            control: 11,
            target: 13,
            j_coupling: 2.0,
            zz_strength: None,
            cx_duration: 800,
            cx_type: crate::device::CxType::Ecr,
            amplitude: None,
            error_rate: None,
        });
        assert!(matches!(
            DDPlan::staggered(x2pm(), &[11, 13, 14], &d),
            Err(DdError::NotBipartite(_))
        ));
    }
}
