// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use crate::linalg::bit;

use super::{DensityMatrix, SimError};

/// Thermal relaxation of one qubit over `elapsed_us`: amplitude damping with
/// p = 1 − exp(−t/T1) followed by pure dephasing at 1/Tφ = 1/T2 − 1/(2T1),
/// so coherences decay as exp(−t/T2) overall. `t1` may be infinite.
pub fn relaxation_channel(
    rho: &DensityMatrix,
    qubit: usize,
    elapsed_us: f64,
    t1: f64,
    t2: f64,
) -> Result<DensityMatrix, SimError> {
    let mut out = rho.clone();
    apply_relaxation(&mut out, qubit, elapsed_us, t1, t2)?;
    Ok(out)
}

pub(crate) fn apply_relaxation(
    rho: &mut DensityMatrix,
    qubit: usize,
    elapsed_us: f64,
    t1: f64,
    t2: f64,
) -> Result<(), SimError> {
    if !(t1 > 0.0 && t2 > 0.0) || t2 > 2.0 * t1 {
        return Err(SimError::InvalidCoherence { t1, t2 });
    }
    if elapsed_us < 0.0 {
        return Err(SimError::InvalidNoise(format!("negative elapsed time {elapsed_us}")));
    }
    if elapsed_us == 0.0 {
        return Ok(());
    }
    let n = rho.num_qubits();
    if qubit >= n {
        return Err(SimError::Dimension(format!("qubit position {qubit} outside {n}-qubit register")));
    }
    let gamma = 1.0 - (-elapsed_us / t1).exp();
    let dephasing_rate = (1.0 / t2 - 0.5 / t1).max(0.0);
    let coherence = (1.0 - gamma).sqrt() * (-elapsed_us * dephasing_rate).exp();
    let mask = 1usize << (n - 1 - qubit);
    let dim = rho.dim();
    let data = rho.data_mut();
    for r in 0..dim {
        let a = bit(r, qubit, n);
        for c in 0..dim {
            let b = bit(c, qubit, n);
            match (a, b) {
                // excited-state population flows into the ground state
                (0, 0) => {
                    let moved = data[(r | mask, c | mask)] * gamma;
                    data[(r, c)] += moved;
                }
                (1, 1) => data[(r, c)] *= 1.0 - gamma,
                _ => data[(r, c)] *= coherence,
            }
        }
    }
    Ok(())
}
