//! JSON and line-oriented text encodings of circuits.
//!
//! JSON: `{"space":"physical","n":4,"gates":[{"kind":"CNOT","operands":["d0","p0_1"]},
//! {"kind":"RZ","operands":["d1"],"angle":0.785}]}`. Logical operands are
//! written `q<i>`; `U` carries `"angles":[alpha,beta,gamma]`.
//!
//! Text: an optional `space <logical|physical> <n>` header, then one gate per
//! line (`CNOT d0 p0_1`, `RZ d1 0.785`). `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::circuit::{LogicalCircuit, LogicalGate, PhysicalCircuit, PhysicalGate};
use crate::error::{Error, Result};
use crate::qubit::QubitId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Logical,
    Physical,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateDoc {
    pub kind: String,
    pub operands: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<[f64; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitDoc {
    pub space: Space,
    pub n: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub name: String,
    pub gates: Vec<GateDoc>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AnyCircuit {
    Logical(LogicalCircuit),
    Physical(PhysicalCircuit),
}

impl AnyCircuit {
    pub fn n(&self) -> usize {
        match self {
            AnyCircuit::Logical(c) => c.n,
            AnyCircuit::Physical(c) => c.n,
        }
    }
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn logical_token(i: usize) -> String {
    format!("q{i}")
}

fn parse_logical_token(s: &str) -> Option<usize> {
    s.strip_prefix('q').unwrap_or(s).parse().ok()
}

fn physical_gate_doc(g: &PhysicalGate) -> GateDoc {
    let angle = match g {
        PhysicalGate::Rx { angle, .. } | PhysicalGate::Rz { angle, .. } => Some(*angle),
        _ => None,
    };
    GateDoc {
        kind: g.name().to_string(),
        operands: g.qubits().iter().map(ToString::to_string).collect(),
        angle,
        angles: None,
    }
}

fn logical_gate_doc(g: &LogicalGate) -> GateDoc {
    let (angle, angles) = match *g {
        LogicalGate::Rx { angle, .. } | LogicalGate::Rz { angle, .. } | LogicalGate::Cp { angle, .. } => {
            (Some(angle), None)
        }
        LogicalGate::U { alpha, beta, gamma, .. } => (None, Some([alpha, beta, gamma])),
        _ => (None, None),
    };
    GateDoc {
        kind: g.name().to_string(),
        operands: g.targets().into_iter().map(logical_token).collect(),
        angle,
        angles,
    }
}

fn physical_from_doc(d: &GateDoc, loc: &str) -> Result<PhysicalGate> {
    let ops = d
        .operands
        .iter()
        .enumerate()
        .map(|(k, s)| {
            s.parse::<QubitId>()
                .map_err(|_| parse_err(format!("{loc}.operands[{k}]"), format!("bad qubit token `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let kind = d.kind.to_ascii_uppercase();
    let arity = if kind == "CNOT" { 2 } else { 1 };
    if ops.len() != arity {
        return Err(parse_err(
            format!("{loc}.operands"),
            format!("{kind} takes {arity} operand(s), got {}", ops.len()),
        ));
    }
    let angle = || d.angle.ok_or_else(|| parse_err(format!("{loc}.angle"), format!("{kind} needs an angle")));
    Ok(match kind.as_str() {
        "CNOT" => {
            if ops[0] == ops[1] {
                return Err(parse_err(format!("{loc}.operands"), "CNOT control equals target"));
            }
            PhysicalGate::cnot(ops[0], ops[1])
        }
        "RX" => PhysicalGate::rx(ops[0], angle()?),
        "RZ" => PhysicalGate::rz(ops[0], angle()?),
        "X" => PhysicalGate::X(ops[0]),
        "H" => PhysicalGate::H(ops[0]),
        "INIT0" => PhysicalGate::Init0(ops[0]),
        "MEASZ" => PhysicalGate::MeasureZ(ops[0]),
        other => return Err(parse_err(format!("{loc}.kind"), format!("unknown physical gate `{other}`"))),
    })
}

fn logical_from_doc(d: &GateDoc, loc: &str) -> Result<LogicalGate> {
    let ops = d
        .operands
        .iter()
        .enumerate()
        .map(|(k, s)| {
            parse_logical_token(s)
                .ok_or_else(|| parse_err(format!("{loc}.operands[{k}]"), format!("bad logical qubit `{s}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    let kind = d.kind.to_ascii_uppercase();
    let arity = match kind.as_str() {
        "CP" | "CZ" | "CNOT" => 2,
        _ => 1,
    };
    if ops.len() != arity {
        return Err(parse_err(
            format!("{loc}.operands"),
            format!("{kind} takes {arity} operand(s), got {}", ops.len()),
        ));
    }
    let angle = || d.angle.ok_or_else(|| parse_err(format!("{loc}.angle"), format!("{kind} needs an angle")));
    Ok(match kind.as_str() {
        "RX" => LogicalGate::Rx { q: ops[0], angle: angle()? },
        "RZ" => LogicalGate::Rz { q: ops[0], angle: angle()? },
        "X" => LogicalGate::X { q: ops[0] },
        "H" => LogicalGate::H { q: ops[0] },
        "U" => {
            let [alpha, beta, gamma] = d
                .angles
                .ok_or_else(|| parse_err(format!("{loc}.angles"), "U needs angles [alpha, beta, gamma]"))?;
            LogicalGate::U { q: ops[0], alpha, beta, gamma }
        }
        "CP" => LogicalGate::Cp { a: ops[0], b: ops[1], angle: angle()? },
        "CZ" => LogicalGate::Cz { a: ops[0], b: ops[1] },
        "CNOT" => LogicalGate::Cnot { control: ops[0], target: ops[1] },
        other => return Err(parse_err(format!("{loc}.kind"), format!("unknown logical gate `{other}`"))),
    })
}

impl CircuitDoc {
    pub fn from_physical(c: &PhysicalCircuit) -> Self {
        Self {
            space: Space::Physical,
            n: c.n,
            name: c.name.clone(),
            gates: c.gates.iter().map(physical_gate_doc).collect(),
        }
    }

    pub fn from_logical(c: &LogicalCircuit) -> Self {
        Self {
            space: Space::Logical,
            n: c.n,
            name: c.name.clone(),
            gates: c.gates.iter().map(logical_gate_doc).collect(),
        }
    }

    pub fn to_circuit(&self) -> Result<AnyCircuit> {
        match self.space {
            Space::Physical => {
                let gates = self
                    .gates
                    .iter()
                    .enumerate()
                    .map(|(k, g)| physical_from_doc(g, &format!("gates[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyCircuit::Physical(PhysicalCircuit {
                    n: self.n,
                    name: self.name.clone(),
                    gates,
                }))
            }
            Space::Logical => {
                let gates = self
                    .gates
                    .iter()
                    .enumerate()
                    .map(|(k, g)| {
                        let loc = format!("gates[{k}]");
                        let gate = logical_from_doc(g, &loc)?;
                        gate.validate(self.n).map_err(|e| parse_err(loc, e.to_string()))?;
                        Ok(gate)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyCircuit::Logical(LogicalCircuit {
                    n: self.n,
                    name: self.name.clone(),
                    gates,
                }))
            }
        }
    }
}

pub fn physical_to_json(c: &PhysicalCircuit) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CircuitDoc::from_physical(c))?)
}

pub fn logical_to_json(c: &LogicalCircuit) -> Result<String> {
    Ok(serde_json::to_string_pretty(&CircuitDoc::from_logical(c))?)
}

pub fn circuit_from_json(s: &str) -> Result<AnyCircuit> {
    let doc: CircuitDoc = serde_json::from_str(s).map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    doc.to_circuit()
}

fn doc_to_text(doc: &CircuitDoc, header_comments: &[String]) -> String {
    let mut out = String::new();
    for c in header_comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    let space = match doc.space {
        Space::Logical => "logical",
        Space::Physical => "physical",
    };
    out.push_str(&format!("space {space} {}\n", doc.n));
    for g in &doc.gates {
        out.push_str(&g.kind);
        for o in &g.operands {
            out.push(' ');
            out.push_str(o);
        }
        if let Some(a) = g.angle {
            out.push_str(&format!(" {a:?}"));
        }
        if let Some(angles) = g.angles {
            for a in angles {
                out.push_str(&format!(" {a:?}"));
            }
        }
        out.push('\n');
    }
    out
}

pub fn physical_to_text(c: &PhysicalCircuit) -> String {
    doc_to_text(&CircuitDoc::from_physical(c), &[])
}

pub fn logical_to_text(c: &LogicalCircuit) -> String {
    doc_to_text(&CircuitDoc::from_logical(c), &[])
}

/// Physical text form with `# ...` lines inserted before the gates at the
/// given indices.
pub fn physical_to_text_annotated(c: &PhysicalCircuit, notes: &[(usize, String)]) -> String {
    let doc = CircuitDoc::from_physical(c);
    let mut out = format!("space physical {}\n", c.n);
    for (k, g) in doc.gates.iter().enumerate() {
        for (_, note) in notes.iter().filter(|(at, _)| *at == k) {
            out.push_str(&format!("# {note}\n"));
        }
        let mut line = g.kind.clone();
        for o in &g.operands {
            line.push(' ');
            line.push_str(o);
        }
        if let Some(a) = g.angle {
            line.push_str(&format!(" {a:?}"));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

/// Parses the text form. Without a `space` header the circuit is taken to be
/// physical over `default_n` logical qubits.
pub fn circuit_from_text(s: &str, default_n: Option<usize>) -> Result<AnyCircuit> {
    let mut space = None;
    let mut n = default_n;
    let mut gates = Vec::new();
    for (lineno, raw) in s.lines().enumerate() {
        let loc = format!("line {}", lineno + 1);
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0].eq_ignore_ascii_case("space") {
            if toks.len() != 3 {
                return Err(parse_err(loc, "expected `space <logical|physical> <n>`"));
            }
            space = Some(match toks[1] {
                "logical" => Space::Logical,
                "physical" => Space::Physical,
                other => return Err(parse_err(loc, format!("unknown space `{other}`"))),
            });
            n = Some(toks[2].parse().map_err(|_| parse_err(&loc, format!("bad n `{}`", toks[2])))?);
            continue;
        }
        let kind = toks[0].to_ascii_uppercase();
        let sp = space.unwrap_or(Space::Physical);
        let arity = match (sp, kind.as_str()) {
            (Space::Physical, "CNOT") => 2,
            (Space::Logical, "CP" | "CZ" | "CNOT") => 2,
            _ => 1,
        };
        if toks.len() < 1 + arity {
            return Err(parse_err(loc, format!("{kind} needs {arity} operand(s)")));
        }
        let operands: Vec<String> = toks[1..1 + arity].iter().map(|t| t.to_string()).collect();
        let nums = toks[1 + arity..]
            .iter()
            .map(|t| t.parse::<f64>().map_err(|_| parse_err(&loc, format!("bad angle `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        let (angle, angles) = match nums.len() {
            0 => (None, None),
            1 => (Some(nums[0]), None),
            3 => (None, Some([nums[0], nums[1], nums[2]])),
            k => return Err(parse_err(loc, format!("unexpected {k} numeric arguments"))),
        };
        gates.push((loc, GateDoc { kind, operands, angle, angles }));
    }
    let sp = space.unwrap_or(Space::Physical);
    let n = n.ok_or_else(|| parse_err("header", "missing `space` header and no default n"))?;
    // reuse the JSON-path validation, but keep line-based locations
    let mut doc = CircuitDoc {
        space: sp,
        n,
        name: String::new(),
        gates: Vec::new(),
    };
    for (loc, g) in gates {
        let single = CircuitDoc {
            space: sp,
            n,
            name: String::new(),
            gates: vec![g.clone()],
        };
        single.to_circuit().map_err(|e| match e {
            Error::Parse { message, .. } => parse_err(loc, message),
            other => other,
        })?;
        doc.gates.push(g);
    }
    doc.to_circuit()
}

/// Parses either encoding, picking JSON when the first non-blank char is `{`.
pub fn circuit_from_str(s: &str, default_n: Option<usize>) -> Result<AnyCircuit> {
    if s.trim_start().starts_with('{') {
        circuit_from_json(s)
    } else {
        circuit_from_text(s, default_n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;
    use QubitId::{Data as D, Parity as P};

    #[test]
    fn physical_json_shape() {
        let c = PhysicalCircuit::with_gates(
            2,
            vec![PhysicalGate::cnot(D(0), P(0, 1)), PhysicalGate::rz(D(1), FRAC_PI_4)],
        );
        let v: serde_json::Value = serde_json::from_str(&physical_to_json(&c).unwrap()).unwrap();
        assert_eq!(v["space"], "physical");
        assert_eq!(v["gates"][0]["operands"][1], "p0_1");
        assert_eq!(v["gates"][1]["angle"], FRAC_PI_4);
        assert!(v["gates"][0].get("angle").is_none());
    }

    #[test]
    fn text_round_trip_exact_angles() {
        let c = PhysicalCircuit::with_gates(
            3,
            vec![
                PhysicalGate::cnot(D(0), P(0, 1)),
                PhysicalGate::rz(D(1), 0.1 + 0.2),
                PhysicalGate::Init0(QubitId::Ancilla(2)),
                PhysicalGate::MeasureZ(QubitId::Ancilla(2)),
            ],
        );
        let t = physical_to_text(&c);
        assert_eq!(circuit_from_text(&t, None).unwrap(), AnyCircuit::Physical(c));
    }

    #[test]
    fn logical_round_trip() {
        let c = LogicalCircuit::with_gates(
            3,
            vec![
                LogicalGate::U { q: 1, alpha: 0.1, beta: 0.2, gamma: 0.3 },
                LogicalGate::Cp { a: 0, b: 2, angle: 1.0 },
                LogicalGate::Cnot { control: 2, target: 0 },
            ],
        );
        assert_eq!(circuit_from_json(&logical_to_json(&c).unwrap()).unwrap(), AnyCircuit::Logical(c.clone()));
        assert_eq!(circuit_from_text(&logical_to_text(&c), None).unwrap(), AnyCircuit::Logical(c));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = r#"{"space":"physical","n":2,"gates":[{"kind":"CNOT","operands":["d0","zz"]}]}"#;
        match circuit_from_json(bad) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "gates[0].operands[1]"),
            other => panic!("{other:?}"),
        }
        let unknown = r#"{"space":"logical","n":2,"gates":[{"kind":"SWAP","operands":["q0","q1"]}]}"#;
        assert!(matches!(circuit_from_json(unknown), Err(Error::Parse { .. })));
        match circuit_from_text("space physical 2\nRZ d0\n", None) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "line 2"),
            other => panic!("{other:?}"),
        }
        assert!(circuit_from_json("{not json").is_err());
    }

    #[test]
    fn logical_indices_checked_against_n() {
        let bad = r#"{"space":"logical","n":2,"gates":[{"kind":"RZ","operands":["q5"],"angle":1.0}]}"#;
        assert!(circuit_from_json(bad).is_err());
    }
}
