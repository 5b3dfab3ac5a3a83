// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Small dense complex matrices and the handful of gate constructors the rest
//! of the crate is built on.
//!
//! Bit order: register position 0 is the most significant bit of a basis
//! index, so `|q0 q1⟩` reads left to right.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// exp(−i θ/2 X)
pub fn rx(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    CMat::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
}

/// exp(−i θ/2 Y)
pub fn ry(theta: f64) -> CMat {
    let (s, co) = (theta / 2.0).sin_cos();
    CMat::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)])
}

/// exp(−i θ/2 Z)
pub fn rz(theta: f64) -> CMat {
    let h = theta / 2.0;
    CMat::from_row_slice(2, 2, &[Complex64::from_polar(1.0, -h), ZERO, ZERO, Complex64::from_polar(1.0, h)])
}

pub fn hadamard() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

/// √X, the physical half-rotation pulse.
pub fn sx() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)])
}

/// CX with the control on the more significant position.
pub fn cx() -> CMat {
    let mut m = CMat::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// exp(−i θ/2 Z⊗Z)
pub fn zz(theta: f64) -> CMat {
    let h = theta / 2.0;
    let m = Complex64::from_polar(1.0, -h);
    let p = Complex64::from_polar(1.0, h);
    CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![m, p, p, m]))
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

pub fn dagger(m: &CMat) -> CMat {
    m.adjoint()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Largest entry deviation of `m` from `phase · reference`, minimised over the
/// global phase.
pub fn phase_distance(m: &CMat, reference: &CMat) -> f64 {
    assert_eq!(m.shape(), reference.shape());
    // best phase aligns the Frobenius inner product
    let inner: Complex64 = reference.iter().zip(m.iter()).map(|(r, x)| r.conj() * x).sum();
    let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { ONE };
    m.iter()
        .zip(reference.iter())
        .map(|(x, r)| (x - phase * r).norm())
        .fold(0.0, f64::max)
}

pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let prod = m.adjoint() * m;
    max_abs_diff(&prod, &identity(m.nrows())) <= tol
}

/// Bit of basis index `index` belonging to register position `pos`.
#[inline]
pub fn bit(index: usize, pos: usize, n: usize) -> usize {
    (index >> (n - 1 - pos)) & 1
}

/// Lift a k-qubit operator acting on `targets` (first target = most
/// significant sub-index bit) to the full `n`-qubit register.
pub fn embed(op: &CMat, targets: &[usize], n: usize) -> CMat {
    let k = targets.len();
    assert_eq!(op.nrows(), 1 << k, "operator size does not match target count");
    let dim = 1usize << n;
    let mut mask = 0usize;
    for &t in targets {
        mask |= 1 << (n - 1 - t);
    }
    let sub = |idx: usize| targets.iter().fold(0usize, |acc, &t| (acc << 1) | bit(idx, t, n));
    let mut full = CMat::zeros(dim, dim);
    for r in 0..dim {
        let sr = sub(r);
        for col in 0..dim {
            if r & !mask != col & !mask {
                continue;
            }
            full[(r, col)] = op[(sr, sub(col))];
        }
    }
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rotations_are_unitary() {
        for t in [0.0, 0.3, PI, -2.1] {
            assert!(is_unitary(&rx(t), 1e-14));
            assert!(is_unitary(&ry(t), 1e-14));
            assert!(is_unitary(&rz(t), 1e-14));
            assert!(is_unitary(&zz(t), 1e-14));
        }
        assert!(is_unitary(&sx(), 1e-14));
        assert!(is_unitary(&hadamard(), 1e-14));
    }

    #[test]
    fn sx_squares_to_x() {
        assert!(max_abs_diff(&(sx() * sx()), &pauli_x()) < 1e-15);
    }

    #[test]
    fn zz_matches_kron_of_z_exponential() {
        let z2 = kron(&pauli_z(), &pauli_z());
        let theta = 0.731;
        let expected = (z2 * c(0.0, -theta / 2.0)).exp();
        assert!(max_abs_diff(&zz(theta), &expected) < 1e-13);
    }

    #[test]
    fn embed_matches_kron() {
        let x = pauli_x();
        let z = pauli_z();
        let xz = kron(&x, &z);
        assert!(max_abs_diff(&embed(&xz, &[0, 1], 2), &xz) < 1e-15);
        // reversed targets swap the tensor factors
        assert!(max_abs_diff(&embed(&xz, &[1, 0], 2), &kron(&z, &x)) < 1e-15);
        let full = embed(&x, &[1], 3);
        let expected = kron(&kron(&identity(2), &x), &identity(2));
        assert!(max_abs_diff(&full, &expected) < 1e-15);
    }

    #[test]
    fn phase_distance_ignores_global_phase() {
        let m = rx(PI);
        assert!(phase_distance(&m, &pauli_x()) < 1e-15);
        assert!(phase_distance(&rx(-PI), &rx(PI)) < 1e-15);
        assert!(phase_distance(&pauli_y(), &pauli_x()) > 0.5);
    }
}
