//! Encoding and decoding circuits between the data row and the full chip.

use std::collections::BTreeSet;

use crate::circuit::{invert, PhysicalCircuit, PhysicalGate};
use crate::error::{Error, Result};
use crate::layout::{Constraint, Layout};
use crate::qubit::QubitId;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Encode,
    Decode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CodecPlan {
    pub circuit: PhysicalCircuit,
    pub direction: Direction,
    pub touched: BTreeSet<QubitId>,
    /// Encoding step (1-based) of every gate of a full encode; empty otherwise.
    pub steps: Vec<usize>,
}

impl CodecPlan {
    fn new(circuit: PhysicalCircuit, direction: Direction, steps: Vec<usize>) -> Self {
        let touched = circuit.gates.iter().flat_map(|g| g.qubits()).collect();
        Self {
            circuit,
            direction,
            touched,
            steps,
        }
    }
}

/// Depth-(n+1) encoder: takes `|psi>` on the data row with every parity
/// qubit in `|0>` to the code state. Gates are listed step by step; parallel
/// grouping falls out of ASAP scheduling.
pub fn encode_full(layout: &Layout) -> CodecPlan {
    let n = layout.n();
    let d = QubitId::Data;
    let p = QubitId::Parity;
    let mut gates = Vec::with_capacity(n * (n - 1));
    let mut steps = Vec::with_capacity(n * (n - 1));
    let mut emit = |step: usize, c: QubitId, t: QubitId| {
        gates.push(PhysicalGate::cnot(c, t));
        steps.push(step);
    };

    for i in 0..n - 1 {
        emit(1, d(i), p(i, i + 1));
    }
    for i in 0..n - 1 {
        emit(2, d(i + 1), p(i, i + 1));
    }
    for i in 1..n - 1 {
        emit(3, p(i, i + 1), p(i - 1, i + 1));
    }
    if n >= 3 {
        emit(4, p(0, 1), p(0, 2));
        for i in 1..n.saturating_sub(2) {
            emit(4, p(i, i + 2), p(i - 1, i + 2));
        }
    }
    for j in 3..n {
        emit(j + 2, p(0, j - 1), p(0, j));
        emit(j + 2, p(1, j - 1), p(1, j));
        for i in 1..n - j {
            emit(j + 2, p(i + 1, i + j - 1), p(i + 1, i + j));
            emit(j + 2, p(i, i + j), p(i - 1, i + j));
        }
    }

    let circuit = PhysicalCircuit::with_gates(n, gates).named(format!("encode_n{n}"));
    CodecPlan::new(circuit, Direction::Encode, steps)
}

/// Reverse of [`encode_full`]: returns every parity qubit of a code state to `|0>`.
pub fn decode_full(layout: &Layout) -> CodecPlan {
    let enc = encode_full(layout);
    let circuit = invert(&enc.circuit)
        .expect("encoder is unitary")
        .named(format!("decode_n{}", layout.n()));
    let mut steps = enc.steps;
    steps.reverse();
    CodecPlan::new(circuit, Direction::Decode, steps)
}

/// Adds `Parity(i, i+1)` to the code from its two adjacent data qubits.
/// The target must start in `|0>` for the constraint to hold afterwards.
pub fn encode_one_direct(layout: &Layout, i: usize, j: usize) -> Result<CodecPlan> {
    layout.check_logical(i)?;
    layout.check_logical(j)?;
    let (i, j) = (i.min(j), i.max(j));
    let target = QubitId::Parity(i, j);
    for q in [QubitId::Data(i), QubitId::Data(j)] {
        if i == j || !layout.are_neighbors(&q, &target)? {
            return Err(Error::NotAdjacent { qubit: target, other: q });
        }
    }
    let circuit = PhysicalCircuit::with_gates(
        layout.n(),
        vec![
            PhysicalGate::cnot(QubitId::Data(i), target),
            PhysicalGate::cnot(QubitId::Data(j), target),
        ],
    );
    Ok(CodecPlan::new(circuit, Direction::Encode, Vec::new()))
}

/// Writes the parity of the other members of `c` into `target`. Applied to a
/// code state instead, the same circuit removes `target` from the code and
/// leaves it holding the constraint value.
pub fn encode_one_from_constraint(layout: &Layout, target: QubitId, c: &Constraint) -> Result<CodecPlan> {
    if !c.contains(&target) {
        return Err(Error::BadConstraint(format!("{target} is not a member of constraint {}", c.id)));
    }
    let gates = c
        .qubits
        .iter()
        .filter(|q| **q != target)
        .map(|q| PhysicalGate::cnot(*q, target))
        .collect();
    Ok(CodecPlan::new(
        PhysicalCircuit::with_gates(layout.n(), gates),
        Direction::Encode,
        Vec::new(),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyndromeStyle {
    /// Fresh ancilla at the plaquette center: init, one CNOT per member, measure.
    Ancilla,
    /// Decode the apex against the rest of the plaquette, measure it, re-encode.
    DecodeMeasureReencode,
}

/// Circuit reading out the value of constraint `c` (outcome 0 on a code state).
pub fn syndrome_circuit(layout: &Layout, c: &Constraint, style: SyndromeStyle) -> Result<PhysicalCircuit> {
    if layout.constraint(c.id) != Some(c) {
        return Err(Error::BadConstraint(format!("constraint {} is not part of the layout", c.id)));
    }
    let mut circuit = PhysicalCircuit::new(layout.n()).named(format!("syndrome_c{}", c.id));
    match style {
        SyndromeStyle::Ancilla => {
            let anc = QubitId::Ancilla(c.id);
            circuit.push(PhysicalGate::Init0(anc));
            for q in &c.qubits {
                circuit.push(PhysicalGate::cnot(*q, anc));
            }
            circuit.push(PhysicalGate::MeasureZ(anc));
        }
        SyndromeStyle::DecodeMeasureReencode => {
            let apex = c.apex();
            let plan = encode_one_from_constraint(layout, apex, c)?;
            let decode = invert(&plan.circuit)?;
            circuit.extend(&decode);
            circuit.push(PhysicalGate::MeasureZ(apex));
            circuit.extend(&plan.circuit);
        }
    }
    Ok(circuit)
}

/// Incremental encoder: row 1 from the data qubits, every higher parity
/// qubit from the plaquette whose apex it is, bottom row first.
pub fn encode_incremental(layout: &Layout) -> Result<PhysicalCircuit> {
    let n = layout.n();
    let mut out = PhysicalCircuit::new(n).named(format!("encode_incremental_n{n}"));
    for i in 0..n - 1 {
        out.extend(&encode_one_direct(layout, i, i + 1)?.circuit);
    }
    for row in 2..n {
        for i in 0..n - row {
            let target = QubitId::Parity(i, i + row);
            let c = layout
                .constraints()
                .iter()
                .find(|c| c.apex() == target)
                .ok_or(Error::UnknownQubit(target))?;
            out.extend(&encode_one_from_constraint(layout, target, c)?.circuit);
        }
    }
    Ok(out)
}

/// Text form of a plan with a `# step k` comment opening every step.
pub fn plan_to_text(plan: &CodecPlan) -> String {
    let mut notes = Vec::new();
    let mut last = 0;
    for (k, &step) in plan.steps.iter().enumerate() {
        if step != last {
            notes.push((k, format!("step {step}")));
            last = step;
        }
    }
    crate::format::physical_to_text_annotated(&plan.circuit, &notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{schedule, validate_locality};
    use crate::layout::build_layout;
    use QubitId::{Data as D, Parity as P};

    #[test]
    fn n2_is_two_cnots() {
        let l = build_layout(2).unwrap();
        let e = encode_full(&l);
        assert_eq!(
            e.circuit.gates,
            vec![PhysicalGate::cnot(D(0), P(0, 1)), PhysicalGate::cnot(D(1), P(0, 1))]
        );
        assert_eq!(schedule(&e.circuit).depth(), 2);
    }

    #[test]
    fn n6_counts() {
        let l = build_layout(6).unwrap();
        let e = encode_full(&l);
        assert_eq!(e.circuit.cnot_count(), 30);
        assert_eq!(schedule(&e.circuit).depth(), 7);
        assert!(validate_locality(&e.circuit, &l).is_empty());
        let d = decode_full(&l);
        assert_eq!(schedule(&d.circuit).depth(), 7);
        assert_eq!(d.direction, Direction::Decode);
    }

    #[test]
    fn direct_encoding_gates() {
        let l = build_layout(3).unwrap();
        let plan = encode_one_direct(&l, 0, 1).unwrap();
        assert_eq!(plan.circuit.len(), 2);
        assert!(plan.circuit.gates.iter().all(|g| matches!(g, PhysicalGate::Cnot { target, .. } if *target == P(0, 1))));
        assert!(matches!(encode_one_direct(&l, 0, 2), Err(Error::NotAdjacent { .. })));
        assert!(encode_one_direct(&l, 1, 1).is_err());
    }

    #[test]
    fn constraint_encoding_sizes() {
        let l = build_layout(4).unwrap();
        let diamond = l.constraints().iter().find(|c| c.len() == 4).unwrap();
        assert_eq!(diamond.apex(), P(0, 3));
        let plan = encode_one_from_constraint(&l, P(0, 3), diamond).unwrap();
        assert_eq!(plan.circuit.cnot_count(), 3);
        let tri = &l.constraints()[0];
        assert_eq!(encode_one_from_constraint(&l, P(0, 1), tri).unwrap().circuit.cnot_count(), 2);
        assert!(encode_one_from_constraint(&l, P(2, 3), tri).is_err());
    }

    #[test]
    fn ancilla_syndrome_shape() {
        let l = build_layout(4).unwrap();
        let diamond = l.constraints().iter().find(|c| c.len() == 4).unwrap();
        let c = syndrome_circuit(&l, diamond, SyndromeStyle::Ancilla).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.cnot_count(), 4);
        assert!(matches!(c.gates[0], PhysicalGate::Init0(QubitId::Ancilla(_))));
        assert!(matches!(c.gates[5], PhysicalGate::MeasureZ(QubitId::Ancilla(_))));
        assert!(validate_locality(&c, &l).is_empty());
    }
}
