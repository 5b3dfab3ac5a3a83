// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Hardware description: per-qubit coherence and frequency data, the
//! coupling graph, and the perturbative static ZZ strength between two
//! fixed-frequency transmons.
//!
//! Units are fixed and never carried in the file: T1/T2 in µs, qubit
//! frequencies and anharmonicities in GHz, couplings J in MHz, ZZ strengths
//! in kHz, and every duration in integer samples (`dt`).

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Device shipped with the crate: ten qubits and seven CX pairs of a 27-qubit
/// heavy-hex processor.
pub const BUNDLED_DEVICE: &str = include_str!("../devices/cairo10.toml");

pub type QubitId = u32;

#[derive(Debug, Error)]
pub enum DeviceError {
    #[error("device file parse error: {0}")]
    Parse(String),
    #[error("invalid device field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
    #[error("perturbative ZZ formula breaks down: {0}")]
    Domain(String),
    #[error("could not read device file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(field: impl Into<String>, reason: impl Into<String>) -> DeviceError {
    DeviceError::Invalid {
        field: field.into(),
        reason: reason.into(),
    }
}

/// Sample period of the waveform generator, held as an exact ratio in ns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dt {
    num: u64,
    den: u64,
}

impl Dt {
    /// 2/9 ns, the reference device's sample period.
    pub const DEFAULT: Dt = Dt { num: 2, den: 9 };

    pub fn new(num: u64, den: u64) -> Result<Self, DeviceError> {
        if num == 0 || den == 0 {
            return Err(invalid("dt_ns", "sample period must be a positive ratio"));
        }
        let g = gcd(num, den);
        Ok(Dt {
            num: num / g,
            den: den / g,
        })
    }

    /// Ratio approximation of a decimal sample period (micro-ns resolution).
    pub fn from_ns_f64(ns: f64) -> Result<Self, DeviceError> {
        if !(ns.is_finite() && ns > 0.0) {
            return Err(invalid("dt_ns", "sample period must be finite and > 0"));
        }
        let scaled = (ns * 1e6).round();
        if scaled < 1.0 {
            return Err(invalid("dt_ns", "sample period below 1e-6 ns"));
        }
        Dt::new(scaled as u64, 1_000_000)
    }

    pub fn as_ns(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn as_seconds(&self) -> f64 {
        self.as_ns() * 1e-9
    }

    pub fn samples_to_ns(&self, samples: u64) -> f64 {
        (samples as f64 * self.num as f64) / self.den as f64
    }

    pub fn samples_to_us(&self, samples: u64) -> f64 {
        self.samples_to_ns(samples) * 1e-3
    }

    /// Convert a duration quoted in ns to samples.
    ///
    /// Values are accepted when they sit within 0.05 ns of a sample boundary,
    /// which is the resolution of durations quoted to one decimal place
    /// (284.4 ns → 1280, 3128.9 ns → 14080). Anything else is rejected.
    pub fn ns_to_samples(&self, ns: f64) -> Result<u64, DeviceError> {
        if !(ns.is_finite() && ns >= 0.0) {
            return Err(invalid("duration", format!("{ns} ns is not a valid duration")));
        }
        let samples = (ns * self.den as f64 / self.num as f64).round();
        let back = self.samples_to_ns(samples as u64);
        if (back - ns).abs() > 0.05 {
            return Err(invalid(
                "duration",
                format!(
                    "{ns} ns is not a multiple of dt = {}/{} ns (nearest: {} samples = {back:.4} ns)",
                    self.num, self.den, samples
                ),
            ));
        }
        Ok(samples as u64)
    }
}

impl Default for Dt {
    fn default() -> Self {
        Dt::DEFAULT
    }
}

impl fmt::Display for Dt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CxType {
    #[serde(rename = "ECR")]
    Ecr,
    #[serde(rename = "DCX")]
    Dcx,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitProps {
    pub index: QubitId,
    /// µs
    pub t1: f64,
    /// µs
    pub t2: f64,
    /// GHz
    pub frequency: f64,
    /// GHz, stored as a positive magnitude.
    pub anharmonicity: f64,
    pub sx_duration: u64,
    pub x_duration: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingProps {
    pub control: QubitId,
    pub target: QubitId,
    /// MHz
    pub j_coupling: f64,
    /// kHz. Measured value; when absent the perturbative estimate is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zz_strength: Option<f64>,
    pub cx_duration: u64,
    pub cx_type: CxType,
    /// Pulse amplitude, carried as opaque calibration metadata.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error_rate: Option<f64>,
}

impl CouplingProps {
    pub fn connects(&self, a: QubitId, b: QubitId) -> bool {
        (self.control == a && self.target == b) || (self.control == b && self.target == a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviceModel {
    pub dt: Dt,
    pub qubits: Vec<QubitProps>,
    pub couplings: Vec<CouplingProps>,
}

/// Static ZZ strength (kHz) of two coupled transmons to second order in J.
///
/// `j_ghz` is the coupling, `delta0`/`delta1` the anharmonicity magnitudes of
/// the control and target, and `detuning` is ω_control − ω_target, all in GHz.
pub fn compute_zz(j_ghz: f64, delta0: f64, delta1: f64, detuning: f64) -> Result<f64, DeviceError> {
    for (name, v) in [("j", j_ghz), ("delta0", delta0), ("delta1", delta1), ("detuning", detuning)] {
        if !v.is_finite() {
            return Err(DeviceError::Domain(format!("{name} is not finite")));
        }
    }
    if delta0 <= 0.0 || delta1 <= 0.0 {
        return Err(DeviceError::Domain(
            "anharmonicity magnitudes must be positive".into(),
        ));
    }
    let lower = delta1 - detuning;
    let upper = delta0 + detuning;
    if lower <= 0.0 || upper <= 0.0 {
        return Err(DeviceError::Domain(format!(
            "|detuning| = {} GHz is outside the straddling regime (δ0 = {delta0}, δ1 = {delta1})",
            detuning.abs()
        )));
    }
    let zz_ghz = 2.0 * j_ghz * j_ghz * (delta0 + delta1) / (lower * upper);
    Ok(zz_ghz * 1e6)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeviceFile {
    #[serde(default)]
    dt_ns: Option<DtField>,
    #[serde(default)]
    qubits: Vec<QubitProps>,
    #[serde(default)]
    couplings: Vec<CouplingProps>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DtField {
    Ratio(String),
    Decimal(f64),
}

impl DtField {
    fn into_dt(self) -> Result<Dt, DeviceError> {
        match self {
            DtField::Decimal(ns) => Dt::from_ns_f64(ns),
            DtField::Ratio(s) => {
                let s = s.trim();
                if let Some((n, d)) = s.split_once('/') {
                    let n = n.trim().parse::<u64>().map_err(|_| invalid("dt_ns", format!("bad ratio `{s}`")))?;
                    let d = d.trim().parse::<u64>().map_err(|_| invalid("dt_ns", format!("bad ratio `{s}`")))?;
                    Dt::new(n, d)
                } else {
                    let ns = s.parse::<f64>().map_err(|_| invalid("dt_ns", format!("bad value `{s}`")))?;
                    Dt::from_ns_f64(ns)
                }
            }
        }
    }
}

/// Parse and validate a device document.
pub fn load_device(source: &str) -> Result<DeviceModel, DeviceError> {
    let file: DeviceFile = toml::from_str(source).map_err(|e| DeviceError::Parse(e.to_string()))?;
    let dt = match file.dt_ns {
        Some(field) => field.into_dt()?,
        None => Dt::DEFAULT,
    };
    let device = DeviceModel {
        dt,
        qubits: file.qubits,
        couplings: file.couplings,
    };
    device.validate()?;
    Ok(device)
}

impl DeviceModel {
    pub fn bundled() -> Self {
        load_device(BUNDLED_DEVICE).expect("bundled device file is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self, DeviceError> {
        let text = std::fs::read_to_string(path).map_err(|source| DeviceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        load_device(&text)
    }

    pub fn validate(&self) -> Result<(), DeviceError> {
        if self.qubits.is_empty() {
            return Err(invalid("qubits", "device must list at least one qubit"));
        }
        let mut seen = HashSet::new();
        for (i, q) in self.qubits.iter().enumerate() {
            let field = |name: &str| format!("qubits[{i}].{name}");
            if !seen.insert(q.index) {
                return Err(invalid(field("index"), format!("duplicate qubit {}", q.index)));
            }
            if !(q.t1.is_finite() || q.t1 == f64::INFINITY) || q.t1 <= 0.0 {
                return Err(invalid(field("t1"), format!("must be > 0, got {}", q.t1)));
            }
            if q.t2.is_nan() || q.t2 <= 0.0 {
                return Err(invalid(field("t2"), format!("must be > 0, got {}", q.t2)));
            }
            if q.t2 > 2.0 * q.t1 {
                return Err(invalid(
                    field("t2"),
                    format!("T2 = {} µs exceeds 2·T1 = {} µs", q.t2, 2.0 * q.t1),
                ));
            }
            if !(q.frequency.is_finite() && q.frequency > 0.0) {
                return Err(invalid(field("frequency"), "must be finite and > 0"));
            }
            if !(q.anharmonicity.is_finite() && q.anharmonicity > 0.0) {
                return Err(invalid(
                    field("anharmonicity"),
                    "must be a finite positive magnitude",
                ));
            }
        }
        let mut pairs = HashSet::new();
        for (i, c) in self.couplings.iter().enumerate() {
            let field = |name: &str| format!("couplings[{i}].{name}");
            if c.control == c.target {
                return Err(invalid(field("target"), "control and target must differ"));
            }
            if !seen.contains(&c.control) {
                return Err(invalid(field("control"), format!("unknown qubit {}", c.control)));
            }
            if !seen.contains(&c.target) {
                return Err(invalid(field("target"), format!("unknown qubit {}", c.target)));
            }
            if c.cx_duration == 0 {
                return Err(invalid(field("cx_duration"), "must be > 0"));
            }
            if !c.j_coupling.is_finite() {
                return Err(invalid(field("j_coupling"), "must be finite"));
            }
            if let Some(zz) = c.zz_strength {
                if !zz.is_finite() {
                    return Err(invalid(field("zz_strength"), "must be finite"));
                }
            }
            let key = (c.control.min(c.target), c.control.max(c.target));
            if !pairs.insert(key) {
                return Err(invalid(
                    field("control"),
                    format!("duplicate coupling between {} and {}", key.0, key.1),
                ));
            }
        }
        Ok(())
    }

    pub fn qubit(&self, index: QubitId) -> Option<&QubitProps> {
        self.qubits.iter().find(|q| q.index == index)
    }

    /// Coupling between `a` and `b` in either direction.
    pub fn coupling(&self, a: QubitId, b: QubitId) -> Option<&CouplingProps> {
        self.couplings.iter().find(|c| c.connects(a, b))
    }

    /// Perturbative ZZ estimate (kHz) for a coupling, from the endpoint
    /// frequencies and anharmonicities.
    pub fn derived_zz(&self, coupling: &CouplingProps) -> Result<f64, DeviceError> {
        let c = self
            .qubit(coupling.control)
            .ok_or_else(|| invalid("control", format!("unknown qubit {}", coupling.control)))?;
        let t = self
            .qubit(coupling.target)
            .ok_or_else(|| invalid("target", format!("unknown qubit {}", coupling.target)))?;
        compute_zz(
            coupling.j_coupling * 1e-3,
            c.anharmonicity,
            t.anharmonicity,
            c.frequency - t.frequency,
        )
    }

    /// ZZ strength (kHz) between two qubits: the tabulated value when the
    /// file provides one, the perturbative estimate otherwise, and `None`
    /// when the qubits are not coupled.
    pub fn zz_strength(&self, a: QubitId, b: QubitId) -> Option<f64> {
        let c = self.coupling(a, b)?;
        match c.zz_strength {
            Some(zz) => Some(zz),
            None => self.derived_zz(c).ok(),
        }
    }

    /// Copy with every gate duration set to zero; used to isolate the
    /// idle-window dynamics from drift accumulated during gates. The result
    /// intentionally does not pass [`DeviceModel::validate`].
    pub fn with_instantaneous_gates(&self) -> Self {
        let mut d = self.clone();
        for q in &mut d.qubits {
            q.sx_duration = 0;
            q.x_duration = 0;
        }
        for c in &mut d.couplings {
            c.cx_duration = 0;
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zz_zero_coupling() {
        assert_eq!(compute_zz(0.0, 0.34, 0.34, 0.09).unwrap(), 0.0);
    }

    #[test]
    fn zz_domain_errors() {
        assert!(matches!(compute_zz(1e-3, 0.34, 0.34, 0.4), Err(DeviceError::Domain(_))));
        assert!(matches!(compute_zz(1e-3, 0.34, 0.34, -0.4), Err(DeviceError::Domain(_))));
        assert!(matches!(compute_zz(1e-3, 0.0, 0.34, 0.0), Err(DeviceError::Domain(_))));
    }

    #[test]
    fn zz_quadratic_in_j_exact() {
        let a = compute_zz(1.93e-3, 0.34, 0.34, 0.09).unwrap();
        let b = compute_zz(2.0 * 1.93e-3, 0.34, 0.34, 0.09).unwrap();
        assert_eq!(b, 4.0 * a);
    }

    #[test]
    fn dt_conversions() {
        let dt = Dt::DEFAULT;
        assert_eq!(dt.ns_to_samples(284.4).unwrap(), 1280);
        assert_eq!(dt.ns_to_samples(3128.9).unwrap(), 14080);
        assert!(dt.ns_to_samples(284.3).is_err());
        assert_eq!(Dt::new(4, 18).unwrap(), Dt::DEFAULT);
    }

    #[test]
    fn bundled_fixture_shape() {
        let d = DeviceModel::bundled();
        assert_eq!(d.qubits.len(), 10);
        assert_eq!(d.couplings.len(), 7);
        assert_eq!(d.dt, Dt::DEFAULT);
        assert_eq!(d.zz_strength(14, 11), Some(46.79));
    }

    #[test]
    fn empty_qubits_rejected() {
        let err = load_device("dt_ns = \"2/9\"\nqubits = []\n").unwrap_err();
        assert!(matches!(err, DeviceError::Invalid { ref field, .. } if field == "qubits"));
    }

    #[test]
    fn unknown_coupling_endpoint_rejected() {
        let doc = r#"
[[qubits]]
index = 0
t1 = 100.0
t2 = 100.0
frequency = 5.0
anharmonicity = 0.34
sx_duration = 160
x_duration = 160

[[couplings]]
control = 0
target = 99
j_coupling = 2.0
cx_duration = 800
cx_type = "ECR"
"#;
        let err = load_device(doc).unwrap_err();
        match err {
            DeviceError::Invalid { field, reason } => {
                assert_eq!(field, "couplings[0].target");
                assert!(reason.contains("99"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn t2_bound_violation_names_field() {
        let doc = r#"
[[qubits]]
index = 3
t1 = 10.0
t2 = 25.0
frequency = 5.0
anharmonicity = 0.34
sx_duration = 160
x_duration = 160
"#;
        let err = load_device(doc).unwrap_err();
        assert!(err.to_string().contains("qubits[0].t2"), "{err}");
    }

    #[test]
    fn parse_error_reports_location() {
        let err = load_device("dt_ns = \n[[qubits]]").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, DeviceError::Parse(_)));
        assert!(msg.contains("line"), "{msg}");
    }
}
