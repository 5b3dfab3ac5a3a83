// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Operator identities behind standard and staggered decoupling of an
//! always-on ZZ term, checked on explicit 4×4 matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{self, kron, max_abs_diff, pauli_x, zz, CMat};

fn xi() -> CMat {
    kron(&pauli_x(), &linalg::identity(2))
}

fn ix() -> CMat {
    kron(&linalg::identity(2), &pauli_x())
}

fn xx() -> CMat {
    kron(&pauli_x(), &pauli_x())
}

/// XX·ZZ(θ)·XX against ZZ(θ): simultaneous flips commute with ZZ.
pub fn simultaneous_flip_commutes(theta: f64) -> f64 {
    max_abs_diff(&(xx() * zz(theta) * xx()), &zz(theta))
}

/// XI·ZZ(θ)·XI and IX·ZZ(θ)·IX against ZZ(−θ): a single flip inverts ZZ.
pub fn single_flip_inverts(theta: f64) -> f64 {
    let a = max_abs_diff(&(xi() * zz(theta) * xi()), &zz(-theta));
    let b = max_abs_diff(&(ix() * zz(theta) * ix()), &zz(-theta));
    a.max(b)
}

/// Standard X2 on both qubits: the four free-evolution angles add up.
pub fn standard_accumulates(thetas: [f64; 4]) -> f64 {
    let [t1, t2, t3, t4] = thetas;
    let lhs = zz(t4) * xx() * zz(t3 + t2) * xx() * zz(t1);
    max_abs_diff(&lhs, &zz(t1 + t2 + t3 + t4))
}

fn staggered_product(thetas: [f64; 4], first: &CMat, second: &CMat) -> CMat {
    let [t1, t2, t3, t4] = thetas;
    second * zz(t4) * first * zz(t3) * second * zz(t2) * first * zz(t1)
}

/// Staggered X2: alternating single flips give ZZ(θ1 − θ2 + θ3 − θ4).
/// `inverse` swaps which qubit flips first.
pub fn staggered_alternates(thetas: [f64; 4], inverse: bool) -> f64 {
    let [t1, t2, t3, t4] = thetas;
    let (first, second) = if inverse { (ix(), xi()) } else { (xi(), ix()) };
    max_abs_diff(&staggered_product(thetas, &first, &second), &zz(t1 - t2 + t3 - t4))
}

/// Staggered X2 with equal sub-interval angles is exactly the identity.
pub fn staggered_cancels(theta: f64, inverse: bool) -> f64 {
    let (first, second) = if inverse { (ix(), xi()) } else { (xi(), ix()) };
    max_abs_diff(&staggered_product([theta; 4], &first, &second), &linalg::identity(4))
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AlgebraReport {
    pub draws: usize,
    pub commute: f64,
    pub invert: f64,
    pub accumulate: f64,
    pub alternate: f64,
    pub cancel: f64,
    pub cancel_inverse: f64,
}

impl AlgebraReport {
    pub fn max_deviation(&self) -> f64 {
        [
            self.commute,
            self.invert,
            self.accumulate,
            self.alternate,
            self.cancel,
            self.cancel_inverse,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn rows(&self) -> [(&'static str, f64); 6] {
        [
            ("XX·ZZ(θ)·XX = ZZ(θ)", self.commute),
            ("XI·ZZ(θ)·XI = IX·ZZ(θ)·IX = ZZ(−θ)", self.invert),
            ("standard X2 accumulates θ1+θ2+θ3+θ4", self.accumulate),
            ("staggered X2 yields θ1−θ2+θ3−θ4", self.alternate),
            ("staggered X2, equal θ → identity", self.cancel),
            ("inverse staggered X2, equal θ → identity", self.cancel_inverse),
        ]
    }
}

/// Evaluate every identity on `draws` random angles in [−2π, 2π).
pub fn run_suite(draws: usize, seed: u64) -> AlgebraReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = 2.0 * std::f64::consts::TAU;
    let mut angle = move || rng.random::<f64>() * span - span / 2.0;
    let mut r = AlgebraReport {
        draws,
        ..Default::default()
    };
    for _ in 0..draws {
        let theta = angle();
        let thetas = [angle(), angle(), angle(), angle()];
        r.commute = r.commute.max(simultaneous_flip_commutes(theta));
        r.invert = r.invert.max(single_flip_inverts(theta));
        r.accumulate = r.accumulate.max(standard_accumulates(thetas));
        r.alternate = r
            .alternate
            .max(staggered_alternates(thetas, false))
            .max(staggered_alternates(thetas, true));
        r.cancel = r.cancel.max(staggered_cancels(theta, false));
        r.cancel_inverse = r.cancel_inverse.max(staggered_cancels(theta, true));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold() {
        let r = run_suite(200, 7);
        assert!(r.max_deviation() < 1e-12, "{r:?}");
    }

    #[test]
    fn unequal_angles_do_not_cancel() {
        assert!(max_abs_diff(&staggered_product([0.1, 0.2, 0.3, 0.4], &xi(), &ix()), &linalg::identity(4)) > 1e-3);
    }
}
