// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use crate::circuit::GateKind;
use crate::linalg::{self, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SequenceName {
    X2,
    X2pm,
    XY4,
    XY4pm,
    XY8,
    XY8pm,
}

impl SequenceName {
    pub const ALL: [SequenceName; 6] = [
        SequenceName::X2,
        SequenceName::X2pm,
        SequenceName::XY4,
        SequenceName::XY4pm,
        SequenceName::XY8,
        SequenceName::XY8pm,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SequenceName::X2 => "x2",
            SequenceName::X2pm => "x2pm",
            SequenceName::XY4 => "xy4",
            SequenceName::XY4pm => "xy4pm",
            SequenceName::XY8 => "xy8",
            SequenceName::XY8pm => "xy8pm",
        }
    }
}

impl fmt::Display for SequenceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SequenceName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SequenceName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown DD sequence `{s}` (expected x2, x2pm, xy4, xy4pm, xy8, xy8pm)"))
    }
}

/// Named train of π pulses inserted into an idle window.
#[derive(Debug, Clone, PartialEq)]
pub struct DDSequence {
    pub name: SequenceName,
    pub gates: Vec<GateKind>,
}

impl DDSequence {
    /// Pulse trains. The `pm` variants flip the sign of every second pulse
    /// about the same axis, so X pulses read Xp, Xm, Xp, … and likewise Y.
    pub fn new(name: SequenceName) -> Self {
        use GateKind::{Xm, Xp, Ym, Yp};
        let gates = match name {
            SequenceName::X2 => vec![Xp, Xp],
            SequenceName::X2pm => vec![Xp, Xm],
            SequenceName::XY4 => vec![Xp, Yp, Xp, Yp],
            SequenceName::XY4pm => vec![Xp, Yp, Xm, Ym],
            SequenceName::XY8 => vec![Xp, Yp, Xp, Yp, Yp, Xp, Yp, Xp],
            SequenceName::XY8pm => vec![Xp, Yp, Xm, Ym, Yp, Xp, Ym, Xm],
        };
        DDSequence { name, gates }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn verify_identity(&self) -> bool {
        verify_identity(&self.gates)
    }
}

/// Ordered product of the pulse matrices (first pulse applied first).
pub fn sequence_unitary(gates: &[GateKind]) -> Option<CMat> {
    gates
        .iter()
        .try_fold(linalg::identity(2), |acc, g| match g.arity() {
            Some(1) => Some(g.matrix()? * acc),
            _ => None,
        })
}

/// True iff the pulses compose to the identity up to a global phase,
/// within 1e-12.
pub fn verify_identity(gates: &[GateKind]) -> bool {
    match sequence_unitary(gates) {
        Some(u) => linalg::phase_distance(&u, &linalg::identity(2)) < 1e-12,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_named_sequences_compose_to_identity() {
        for name in SequenceName::ALL {
            assert!(DDSequence::new(name).verify_identity(), "{name}");
        }
    }

    #[test]
    fn x2_is_minus_identity() {
        let u = sequence_unitary(&DDSequence::new(SequenceName::X2).gates).unwrap();
        assert!(linalg::max_abs_diff(&u, &(-linalg::identity(2))) < 1e-15);
    }

    #[test]
    fn xp_yp_is_not_identity() {
        assert!(!verify_identity(&[GateKind::Xp, GateKind::Yp]));
        assert!(!verify_identity(&[GateKind::Xp]));
    }

    #[test]
    fn names_parse() {
        assert_eq!("XY8pm".parse::<SequenceName>().unwrap(), SequenceName::XY8pm);
        assert!("udd".parse::<SequenceName>().is_err());
    }

    #[test]
    fn pm_variants_alternate_sign_per_axis() {
        let s = DDSequence::new(SequenceName::XY8pm);
        let xs: Vec<_> = s.gates.iter().filter(|g| matches!(g, GateKind::Xp | GateKind::Xm)).collect();
        let ys: Vec<_> = s.gates.iter().filter(|g| matches!(g, GateKind::Yp | GateKind::Ym)).collect();
        assert_eq!(xs, [&GateKind::Xp, &GateKind::Xm, &GateKind::Xp, &GateKind::Xm]);
        assert_eq!(ys, [&GateKind::Yp, &GateKind::Ym, &GateKind::Yp, &GateKind::Ym]);
    }
}
