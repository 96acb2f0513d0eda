//! CNOT-pair cancellation with commutation-based look-ahead.

use crate::circuit::{PhysicalCircuit, PhysicalGate};

/// Whether `other` may be moved across the CNOT `control -> target`.
fn commutes_with_cnot(control: &crate::QubitId, target: &crate::QubitId, other: &PhysicalGate) -> bool {
    if !other.touches(control) && !other.touches(target) {
        return true;
    }
    match *other {
        PhysicalGate::Rz { q, .. } => q == *control,
        // CNOTs sharing only a control or only a target commute
        PhysicalGate::Cnot { control: c2, target: t2 } => {
            (c2 == *control && t2 != *target) || (t2 == *target && c2 != *control)
        }
        _ => false,
    }
}

/// Removes pairs of identical CNOTs that can be brought next to each other.
///
/// A CNOT looks forward past gates on disjoint qubits, `Rz` on its control
/// and CNOTs sharing just its control or just its target. Every rewrite drops
/// two gates, so the pass terminates and never grows the circuit.
pub fn peephole(c: &PhysicalCircuit) -> PhysicalCircuit {
    let mut gates = c.gates.clone();
    loop {
        let mut removed = None;
        'outer: for i in 0..gates.len() {
            let PhysicalGate::Cnot { control, target } = gates[i] else {
                continue;
            };
            for j in i + 1..gates.len() {
                if gates[j] == gates[i] {
                    removed = Some((i, j));
                    break 'outer;
                }
                if !commutes_with_cnot(&control, &target, &gates[j]) {
                    break;
                }
            }
        }
        match removed {
            Some((i, j)) => {
                gates.remove(j);
                gates.remove(i);
            }
            None => break,
        }
    }
    PhysicalCircuit {
        n: c.n,
        name: c.name.clone(),
        gates,
    }
}
