// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

use super::DdError;

/// Timing role of one qubit inside a DD window group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StaggerRole {
    /// Pulses centred at (2k−1)·T/(2N): half an interval of free evolution
    /// at both ends of the window.
    Symmetric,
    /// Pulses centred at k·T/N, halfway between the symmetric pulses; the
    /// last one finishes at the window end.
    Staggered,
}

impl StaggerRole {
    pub fn swapped(self) -> Self {
        match self {
            StaggerRole::Symmetric => StaggerRole::Staggered,
            StaggerRole::Staggered => StaggerRole::Symmetric,
        }
    }
}

/// Ideal centre of pulse `k` (1-based) as the exact ratio `num / den` in dt.
fn center_ratio(window: u64, n: u64, k: u64, role: StaggerRole) -> (u64, u64) {
    match role {
        StaggerRole::Symmetric => ((2 * k - 1) * window, 2 * n),
        StaggerRole::Staggered => (2 * k * window, 2 * n),
    }
}

/// Ideal (unrounded) pulse centres in dt.
pub fn pulse_centers(window: u64, n_pulses: usize, role: StaggerRole) -> Vec<f64> {
    (1..=n_pulses as u64)
        .map(|k| {
            let (num, den) = center_ratio(window, n_pulses as u64, k, role);
            num as f64 / den as f64
        })
        .collect()
}

/// Start offsets (dt, relative to the window start) of `n_pulses` pulses of
/// length `gate_duration`.
///
/// Starts are `floor(centre − gate/2)`, then pulled back where needed so the
/// last pulse ends inside the window and consecutive pulses do not overlap.
/// Returned starts are strictly increasing.
pub fn pulse_times(
    window_duration: u64,
    n_pulses: usize,
    role: StaggerRole,
    gate_duration: u64,
) -> Result<Vec<u64>, DdError> {
    let too_short = || DdError::WindowTooShort {
        window: window_duration,
        pulses: n_pulses,
        gate_duration,
    };
    if n_pulses == 0 {
        return Ok(Vec::new());
    }
    let n = n_pulses as u64;
    if window_duration < n * gate_duration {
        return Err(too_short());
    }
    let g = gate_duration as i128;
    let mut starts: Vec<i128> = (1..=n)
        .map(|k| {
            let (num, den) = center_ratio(window_duration, n, k, role);
            // floor((num/den) - g/2) = floor((2 num - den g) / (2 den))
            let top = 2 * num as i128 - den as i128 * g;
            top.div_euclid(2 * den as i128).max(0)
        })
        .collect();
    let step = g.max(1);
    let last = starts.len() - 1;
    starts[last] = starts[last].min(window_duration as i128 - g);
    for k in (0..last).rev() {
        starts[k] = starts[k].min(starts[k + 1] - step);
    }
    if starts[0] < 0 {
        return Err(too_short());
    }
    Ok(starts.into_iter().map(|s| s as u64).collect())
}

/// Largest distance (dt) between a placed pulse centre and its ideal centre.
pub fn placement_error(window: u64, starts: &[u64], role: StaggerRole, gate_duration: u64) -> f64 {
    pulse_centers(window, starts.len(), role)
        .into_iter()
        .zip(starts)
        .map(|(ideal, &s)| (s as f64 + gate_duration as f64 / 2.0 - ideal).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_x2_centres() {
        assert_eq!(pulse_times(1280, 2, StaggerRole::Symmetric, 0).unwrap(), vec![320, 960]);
    }

    #[test]
    fn staggered_x2_centres() {
        assert_eq!(pulse_times(1280, 2, StaggerRole::Staggered, 0).unwrap(), vec![640, 1280]);
    }

    #[test]
    fn finite_pulses_are_centred() {
        assert_eq!(pulse_times(1280, 2, StaggerRole::Symmetric, 160).unwrap(), vec![240, 880]);
        // last staggered pulse abuts the window end
        assert_eq!(pulse_times(1280, 2, StaggerRole::Staggered, 160).unwrap(), vec![560, 1120]);
    }

    #[test]
    fn too_short_window() {
        assert!(matches!(
            pulse_times(100, 8, StaggerRole::Symmetric, 20),
            Err(DdError::WindowTooShort { .. })
        ));
        assert!(pulse_times(100, 8, StaggerRole::Staggered, 20).is_err());
        // zero-length pulses still need distinct instants
        assert!(pulse_times(3, 8, StaggerRole::Symmetric, 0).is_err());
    }

    #[test]
    fn tight_fit_packs_back_to_back() {
        let s = pulse_times(320, 2, StaggerRole::Staggered, 160).unwrap();
        assert_eq!(s, vec![0, 160]);
    }

    proptest! {
        #[test]
        fn starts_fit_and_stay_near_ideal(
            window in 0u64..20_000,
            n in prop::sample::select(vec![2usize, 4, 8]),
            gate in 0u64..200,
            staggered in any::<bool>(),
        ) {
            let role = if staggered { StaggerRole::Staggered } else { StaggerRole::Symmetric };
            match pulse_times(window, n, role, gate) {
                Ok(starts) => {
                    prop_assert_eq!(starts.len(), n);
                    for w in starts.windows(2) {
                        prop_assert!(w[0] + gate.max(1) <= w[1]);
                    }
                    prop_assert!(starts[n - 1] + gate <= window);
                    // windows with room to spare keep every centre within 1 dt
                    // of its ideal position, except the staggered tail pulse
                    // which is pulled inside the window
                    if window >= 4 * n as u64 * gate.max(1) {
                        let check = if staggered { n - 1 } else { n };
                        let ideal = pulse_centers(window, n, role);
                        for k in 0..check {
                            let placed = starts[k] as f64 + gate as f64 / 2.0;
                            prop_assert!((placed - ideal[k]).abs() <= 1.0, "k={} placed={} ideal={}", k, placed, ideal[k]);
                        }
                    }
                }
                Err(_) => prop_assert!(window < n as u64 * gate.max(1)),
            }
        }
    }
}
