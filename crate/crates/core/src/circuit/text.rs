// Copyright 2026 The stagger-dd Developers
// SPDX-License-Identifier: Apache-2.0

//! Line-oriented circuit interchange format.
//!
//! ```text
//! // optional register declaration; defaults to order of first use
//! qubits q11,q14
//! xp q11 @0 #160
//! rz(1.5707963267948966) q14
//! cx q11,q14 @160 #848
//! delay(1280) q14
//! unitary(1:0,0:0,0:0,1:0) q11
//! measure q11
//! ```
//!
//! `@start` and `#duration` are optional and in dt. Unitary entries are
//! row-major `re:im` pairs. Floats are written in shortest round-trip form, so
//! emit followed by parse is lossless.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::device::QubitId;
use crate::linalg::CMat;

use super::{Circuit, CircuitError, GateKind, Instruction};

pub type ParsedCircuit = Circuit;

fn parse_err(line: usize, reason: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        reason: reason.into(),
    }
}

fn parse_qubits(line: usize, token: &str) -> Result<Vec<QubitId>, CircuitError> {
    token
        .split(',')
        .map(|s| {
            let s = s.trim();
            let digits = s.strip_prefix('q').unwrap_or(s);
            digits
                .parse::<QubitId>()
                .map_err(|_| parse_err(line, format!("bad qubit `{s}`")))
        })
        .collect()
}

fn parse_arg<'a>(line: usize, token: &'a str, name: &str) -> Result<&'a str, CircuitError> {
    token
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| parse_err(line, format!("expected `{name}(...)`, got `{token}`")))
}

fn parse_gate(line: usize, token: &str) -> Result<GateKind, CircuitError> {
    let lower = token.to_ascii_lowercase();
    Ok(match lower.as_str() {
        "xp" | "x" => GateKind::Xp,
        "xm" => GateKind::Xm,
        "yp" | "y" => GateKind::Yp,
        "ym" => GateKind::Ym,
        "sx" => GateKind::SX,
        "h" => GateKind::H,
        "cx" => GateKind::CX,
        "barrier" => GateKind::Barrier,
        "measure" => GateKind::Measure,
        t if t.starts_with("rz(") => {
            let a = parse_arg(line, t, "rz")?;
            GateKind::RZ(a.parse().map_err(|_| parse_err(line, format!("bad angle `{a}`")))?)
        }
        t if t.starts_with("delay(") => {
            let a = parse_arg(line, t, "delay")?;
            GateKind::Delay(a.parse().map_err(|_| parse_err(line, format!("bad delay `{a}`")))?)
        }
        t if t.starts_with("unitary(") => {
            let a = parse_arg(line, t, "unitary")?;
            let entries = a
                .split(',')
                .map(|e| {
                    let (re, im) = e
                        .split_once(':')
                        .ok_or_else(|| parse_err(line, format!("bad matrix entry `{e}`")))?;
                    let re: f64 = re.trim().parse().map_err(|_| parse_err(line, format!("bad number `{re}`")))?;
                    let im: f64 = im.trim().parse().map_err(|_| parse_err(line, format!("bad number `{im}`")))?;
                    Ok(Complex64::new(re, im))
                })
                .collect::<Result<Vec<_>, CircuitError>>()?;
            let dim = match entries.len() {
                4 => 2,
                16 => 4,
                n => return Err(parse_err(line, format!("unitary needs 4 or 16 entries, got {n}"))),
            };
            GateKind::Unitary(CMat::from_row_slice(dim, dim, &entries))
        }
        _ => return Err(parse_err(line, format!("unknown gate `{token}`"))),
    })
}

/// Parse the text format. Timing annotations are kept as given; the result
/// is validated but not scheduled.
pub fn parse_text(source: &str) -> Result<Circuit, CircuitError> {
    let mut register: Option<Vec<QubitId>> = None;
    let mut seen: Vec<QubitId> = Vec::new();
    let mut instructions = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split("//").next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let head = tokens.next().expect("non-empty");
        if head.eq_ignore_ascii_case("qubits") {
            let list = tokens.next().ok_or_else(|| parse_err(line, "missing qubit list"))?;
            if register.is_some() || !instructions.is_empty() {
                return Err(parse_err(line, "register must be declared once, before instructions"));
            }
            register = Some(parse_qubits(line, list)?);
            continue;
        }
        let kind = parse_gate(line, head)?;
        let qubits = parse_qubits(line, tokens.next().ok_or_else(|| parse_err(line, "missing qubits"))?)?;
        let mut inst = Instruction::new(kind, qubits);
        for tok in tokens {
            if let Some(v) = tok.strip_prefix('@') {
                inst.start = Some(v.parse().map_err(|_| parse_err(line, format!("bad start `{tok}`")))?);
            } else if let Some(v) = tok.strip_prefix('#') {
                inst.duration = Some(v.parse().map_err(|_| parse_err(line, format!("bad duration `{tok}`")))?);
            } else {
                return Err(parse_err(line, format!("unexpected token `{tok}`")));
            }
        }
        if let GateKind::Delay(d) = inst.kind {
            if inst.duration.is_none() {
                inst.duration = Some(d);
            }
        }
        for &q in &inst.qubits {
            if !seen.contains(&q) {
                seen.push(q);
            }
        }
        instructions.push(inst);
    }
    let circuit = Circuit {
        qubits: register.unwrap_or(seen),
        instructions,
    };
    circuit.validate()?;
    Ok(circuit)
}

/// Render instructions in the text format, including any timing already set.
pub fn emit_text(qubits: &[QubitId], instructions: &[Instruction]) -> String {
    let mut out = String::new();
    let reg: Vec<String> = qubits.iter().map(|q| format!("q{q}")).collect();
    let _ = writeln!(out, "qubits {}", reg.join(","));
    for inst in instructions {
        let gate = match &inst.kind {
            GateKind::Unitary(m) => {
                let mut entries = Vec::with_capacity(m.len());
                for r in 0..m.nrows() {
                    for c in 0..m.ncols() {
                        let z = m[(r, c)];
                        entries.push(format!("{:?}:{:?}", z.re, z.im));
                    }
                }
                format!("unitary({})", entries.join(","))
            }
            GateKind::RZ(a) => format!("rz({a:?})"),
            other => other.to_string(),
        };
        let qs: Vec<String> = inst.qubits.iter().map(|q| format!("q{q}")).collect();
        let _ = write!(out, "{gate} {}", qs.join(","));
        if let Some(s) = inst.start {
            let _ = write!(out, " @{s}");
        }
        if let Some(d) = inst.duration {
            let _ = write!(out, " #{d}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::ScheduledCircuit;
    use proptest::prelude::*;

    #[test]
    fn parses_example() {
        let src = "qubits q11,q14\nxp q11 @0 #160 // first pulse\ncx 11,14\ndelay(1280) q14\n\nrz(0.5) q14\n";
        let c = parse_text(src).unwrap();
        assert_eq!(c.qubits, vec![11, 14]);
        assert_eq!(c.instructions.len(), 4);
        assert_eq!(c.instructions[0].start, Some(0));
        assert_eq!(c.instructions[0].duration, Some(160));
        assert_eq!(c.instructions[2].duration, Some(1280));
        assert_eq!(c.instructions[3].kind, GateKind::RZ(0.5));
    }

    #[test]
    fn reports_line_number() {
        let err = parse_text("xp q0\nfoo q1\n").unwrap_err();
        assert_eq!(
            err,
            CircuitError::Parse {
                line: 2,
                reason: "unknown gate `foo`".into()
            }
        );
    }

    #[test]
    fn scheduled_round_trip() {
        let src = "qubits q0,q1\nh q0 @0 #160\ncx q0,q1 @160 #800\nunitary(0:1,1:0,1:0,0:0) q1 @960 #0\n";
        // the 2x2 above is not unitary; validation must catch it
        assert!(parse_text(src).is_err());
        let src = "qubits q0,q1\nh q0 @0 #160\ncx q0,q1 @160 #800\nmeasure q0 @960 #0\n";
        let c = parse_text(src).unwrap();
        let s = ScheduledCircuit::from_parts(c.qubits.clone(), c.instructions.clone()).unwrap();
        assert_eq!(s.total_duration(), 960);
        assert_eq!(emit_text(s.qubits(), s.instructions()), src);
    }

    proptest! {
        #[test]
        fn emit_parse_is_lossless(angles in proptest::collection::vec(-10.0f64..10.0, 1..6), theta in -3.0f64..3.0) {
            let mut c = Circuit::new(vec![3, 5]);
            for a in &angles {
                c.gate(GateKind::RZ(*a), &[3]);
                c.gate(GateKind::CX, &[3, 5]);
            }
            c.gate(GateKind::Unitary(crate::linalg::ry(theta)), &[5]);
            c.delay(&[5], 17);
            let text = emit_text(&c.qubits, &c.instructions);
            let back = parse_text(&text).unwrap();
            prop_assert_eq!(back, c);
        }
    }
}
