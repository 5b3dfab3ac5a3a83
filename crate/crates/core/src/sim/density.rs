// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::{self, CMat, ONE, ZERO};

use super::SimError;

/// Mixed state of up to four qubits. Register position 0 is the most
/// significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: CMat,
}

pub const MAX_QUBITS: usize = 4;

impl DensityMatrix {
    pub fn from_matrix(data: CMat) -> Result<Self, SimError> {
        let dim = data.nrows();
        if !data.is_square() || !dim.is_power_of_two() || dim < 2 {
            return Err(SimError::Dimension(format!("{}×{} is not a qubit register", data.nrows(), data.ncols())));
        }
        let n = dim.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n));
        }
        Ok(DensityMatrix { n, data })
    }

    /// |b⟩⟨b| for a bitstring such as `"0110"`.
    pub fn basis(bits: &str) -> Result<Self, SimError> {
        let idx = parse_bits(bits)?;
        let dim = 1 << bits.len();
        let mut data = CMat::zeros(dim, dim);
        data[(idx, idx)] = ONE;
        Self::from_matrix(data)
    }

    pub fn zero(n: usize) -> Result<Self, SimError> {
        Self::basis(&"0".repeat(n))
    }

    /// |ψ⟩⟨ψ| for a normalised state vector.
    pub fn pure(state: &[Complex64]) -> Result<Self, SimError> {
        let v = DVector::from_column_slice(state);
        let norm = v.norm();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::Dimension(format!("state vector has norm {norm}")));
        }
        Self::from_matrix(&v * v.adjoint())
    }

    /// Tensor product of single-qubit pure states, position 0 first.
    pub fn product(states: &[[Complex64; 2]]) -> Result<Self, SimError> {
        let mut v = DVector::from_element(1, ONE);
        for s in states {
            v = v.kronecker(&DVector::from_column_slice(s));
        }
        Self::pure(v.as_slice())
    }

    pub fn maximally_mixed(n: usize) -> Result<Self, SimError> {
        let dim = 1usize << n;
        Self::from_matrix(CMat::identity(dim, dim) / Complex64::new(dim as f64, 0.0))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &CMat {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        linalg::max_abs_diff(&self.data, &self.data.adjoint())
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Hermitian within 1e-10, unit trace within 1e-10 and no eigenvalue
    /// below −1e-8.
    pub fn check_invariants(&self) -> Result<(), SimError> {
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(SimError::InvalidState(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = (self.trace() - ONE).norm();
        if tr > 1e-10 {
            return Err(SimError::InvalidState(format!("trace deviates from 1 by {tr:e}")));
        }
        let min = self.eigenvalues()[0];
        if min < -1e-8 {
            return Err(SimError::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// ρ → U ρ U† with `op` acting on register positions `targets`.
    pub fn apply_unitary(&mut self, op: &CMat, targets: &[usize]) {
        let full = linalg::embed(op, targets, self.n);
        self.data = &full * &self.data * full.adjoint();
    }

    /// ρ → D ρ D† for a diagonal unitary D = diag(exp(i·phases)).
    pub fn apply_diagonal_phases(&mut self, phases: &[f64]) {
        let dim = self.dim();
        assert_eq!(phases.len(), dim);
        for r in 0..dim {
            for c in 0..dim {
                if r != c {
                    self.data[(r, c)] *= Complex64::from_polar(1.0, phases[r] - phases[c]);
                }
            }
        }
    }

    /// ⟨bits|ρ|bits⟩.
    pub fn population(&self, bits: &str) -> Result<f64, SimError> {
        if bits.len() != self.n {
            return Err(SimError::Dimension(format!(
                "bitstring `{bits}` has {} bits, state has {} qubits",
                bits.len(),
                self.n
            )));
        }
        let idx = parse_bits(bits)?;
        Ok(self.data[(idx, idx)].re)
    }

    /// Probability that the listed register positions read the given bits,
    /// all other qubits traced out.
    pub fn marginal_population(&self, outcome: &[(usize, u8)]) -> f64 {
        (0..self.dim())
            .filter(|&i| outcome.iter().all(|&(p, b)| linalg::bit(i, p, self.n) == b as usize))
            .map(|i| self.data[(i, i)].re)
            .sum()
    }

    /// ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let diff = &self.data - &other.data;
        let herm = (&diff + diff.adjoint()) * Complex64::new(0.5, 0.0);
        0.5 * herm.symmetric_eigenvalues().iter().map(|e| e.abs()).sum::<f64>()
    }

    /// ⟨ψ|ρ|ψ⟩ for a pure reference.
    pub fn fidelity_with_pure(&self, state: &[Complex64]) -> f64 {
        let v = DVector::from_column_slice(state);
        (v.adjoint() * &self.data * &v)[(0, 0)].re
    }

    pub(crate) fn data_mut(&mut self) -> &mut CMat {
        &mut self.data
    }
}

fn parse_bits(bits: &str) -> Result<usize, SimError> {
    if bits.is_empty() {
        return Err(SimError::Dimension("empty bitstring".into()));
    }
    bits.chars().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok((acc << 1) | 1),
        other => Err(SimError::Dimension(format!("bad bit `{other}`"))),
    })
}

/// Single-qubit |+⟩.
pub fn plus() -> [Complex64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(s, 0.0), Complex64::new(s, 0.0)]
}

/// Single-qubit |0⟩.
pub fn ket0() -> [Complex64; 2] {
    [ONE, ZERO]
}

/// Single-qubit |1⟩.
pub fn ket1() -> [Complex64; 2] {
    [ZERO, ONE]
}
