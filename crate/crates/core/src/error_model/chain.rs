//! Propagation of single bit-flip faults through a folded line rotation.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::circuit::{PhysicalCircuit, PhysicalGate};
use crate::compiler::{compile_rx, LoweringOptions, RotationSite};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::qubit::QubitId;

/// Pushes a set of X flips forward through `gates`.
///
/// CNOTs copy a flip from control to target; `X` and `Rx` commute with X.
/// Anything else touching a flipped qubit would turn the flip into a
/// non-X Pauli, which this model does not track, and is rejected.
pub fn propagate_x(gates: &[PhysicalGate], flips: &BTreeSet<QubitId>) -> Result<BTreeSet<QubitId>> {
    let mut flips = flips.clone();
    for g in gates {
        match *g {
            PhysicalGate::Cnot { control, target } => {
                if flips.contains(&control) && !flips.insert(target) {
                    flips.remove(&target);
                }
            }
            PhysicalGate::X(_) | PhysicalGate::Rx { .. } => {}
            _ => {
                if let Some(q) = g.qubits().into_iter().find(|q| flips.contains(q)) {
                    return Err(Error::BadGate(format!("{g} does not commute with X on {q}")));
                }
            }
        }
    }
    Ok(flips)
}

/// One X fault and where it ends up after the rotation completes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Injection {
    /// Position of the faulty qubit along the line path.
    pub position: usize,
    /// Number of fold CNOTs applied before the fault.
    pub after_gate: usize,
    /// Path positions carrying a flip at the end, ascending.
    pub pattern: Vec<usize>,
    pub center_hit: bool,
    /// Flip positions form one run containing the fault site and lying
    /// entirely on its side of the center.
    pub contiguous_outward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub logical_index: usize,
    pub center: usize,
    pub circuit: Vec<String>,
    pub injections: Vec<Injection>,
}

impl ChainReport {
    /// Every fault stays off the center unless placed on it, and spreads only outward.
    pub fn holds(&self) -> bool {
        self.injections
            .iter()
            .all(|i| i.center_hit == (i.position == self.center) && (i.position == self.center || i.contiguous_outward))
    }
}

/// Center-site `Rx` lowering of logical qubit `i` used for the fault analysis.
pub fn chain_circuit(layout: &Layout, i: usize) -> Result<PhysicalCircuit> {
    Ok(compile_rx(layout, i, 0.37, LoweringOptions::new(RotationSite::Center, false))?.physical)
}

/// Injects one X at every path position after every prefix of the fold and
/// propagates it through the rest of the rotation.
pub fn chain_error_locality_check(layout: &Layout, i: usize) -> Result<ChainReport> {
    let line = layout.logical_line(i)?;
    let center = line.center_position();
    let c = chain_circuit(layout, i)?;
    let fold_len = line.path.len() - 1;
    let pos = |q: &QubitId| line.path.iter().position(|p| p == q).expect("flip stays on the line");
    let mut injections = Vec::new();
    for after_gate in 0..=fold_len {
        for (position, q) in line.path.iter().enumerate() {
            let out = propagate_x(&c.gates[after_gate..], &BTreeSet::from([*q]))?;
            let pattern: Vec<usize> = {
                let mut v: Vec<usize> = out.iter().map(pos).collect();
                v.sort_unstable();
                v
            };
            let run = pattern.windows(2).all(|w| w[1] == w[0] + 1);
            let outward = pattern.iter().all(|&k| {
                if position < center {
                    k <= position
                } else {
                    k >= position
                }
            });
            injections.push(Injection {
                position,
                after_gate,
                center_hit: pattern.contains(&center),
                contiguous_outward: run && outward && pattern.contains(&position),
                pattern,
            });
        }
    }
    Ok(ChainReport {
        logical_index: i,
        center,
        circuit: c.gates.iter().map(|g| g.to_string()).collect(),
        injections,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::build_layout;

    #[test]
    fn outermost_before_fold_stays_single() {
        let l = build_layout(4).unwrap();
        let r = chain_error_locality_check(&l, 0).unwrap();
        let first = r.injections.iter().find(|i| i.after_gate == 0 && i.position == 0).unwrap();
        assert_eq!(first.pattern, vec![0]);
        assert!(!first.center_hit);
    }

    #[test]
    fn center_hits_only_from_center() {
        for n in 2..9 {
            let l = build_layout(n).unwrap();
            for i in 0..n {
                let r = chain_error_locality_check(&l, i).unwrap();
                assert!(r.holds(), "n={n} i={i}");
                assert!(r.injections.iter().any(|j| j.center_hit));
            }
        }
    }

    #[test]
    fn cnot_copies_flip() {
        let g = [PhysicalGate::cnot(QubitId::Data(0), QubitId::Parity(0, 1))];
        let out = propagate_x(&g, &BTreeSet::from([QubitId::Data(0)])).unwrap();
        assert_eq!(out.len(), 2);
        let rz = [PhysicalGate::rz(QubitId::Data(0), 0.1)];
        assert!(propagate_x(&rz, &BTreeSet::from([QubitId::Data(0)])).is_err());
    }
}
