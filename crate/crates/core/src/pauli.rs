//! Pauli strings over physical qubit labels in symplectic (x|z) form.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::qubit::QubitId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    /// Symplectic bits `(x, z)`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Option<Pauli> {
        match (x, z) {
            (false, false) => None,
            (true, false) => Some(Pauli::X),
            (true, true) => Some(Pauli::Y),
            (false, true) => Some(Pauli::Z),
        }
    }
}

/// Tensor product of single-qubit Paulis, identity off-support. Phases are
/// not tracked; products are taken modulo phase.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PauliString {
    ops: BTreeMap<QubitId, Pauli>,
}

impl PauliString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniform<I: IntoIterator<Item = QubitId>>(qubits: I, p: Pauli) -> Self {
        Self {
            ops: qubits.into_iter().map(|q| (q, p)).collect(),
        }
    }

    pub fn z_on<I: IntoIterator<Item = QubitId>>(qubits: I) -> Self {
        Self::uniform(qubits, Pauli::Z)
    }

    pub fn x_on<I: IntoIterator<Item = QubitId>>(qubits: I) -> Self {
        Self::uniform(qubits, Pauli::X)
    }

    pub fn with(mut self, q: QubitId, p: Pauli) -> Self {
        self.ops.insert(q, p);
        self
    }

    pub fn get(&self, q: &QubitId) -> Option<Pauli> {
        self.ops.get(q).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (QubitId, Pauli)> + '_ {
        self.ops.iter().map(|(q, p)| (*q, *p))
    }

    pub fn support(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.ops.keys().copied()
    }

    pub fn weight(&self) -> usize {
        self.ops.len()
    }

    pub fn is_identity(&self) -> bool {
        self.ops.is_empty()
    }

    /// Symplectic inner product is zero.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let (small, large) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut parity = false;
        for (q, p) in small.iter() {
            if let Some(r) = large.get(&q) {
                let (x1, z1) = p.bits();
                let (x2, z2) = r.bits();
                parity ^= (x1 && z2) ^ (z1 && x2);
            }
        }
        !parity
    }

    /// Product modulo phase.
    pub fn mul(&self, other: &PauliString) -> PauliString {
        let mut out = self.clone();
        for (q, p) in other.iter() {
            let (x2, z2) = p.bits();
            let (x1, z1) = out.get(&q).map(Pauli::bits).unwrap_or((false, false));
            match Pauli::from_bits(x1 ^ x2, z1 ^ z2) {
                Some(r) => {
                    out.ops.insert(q, r);
                }
                None => {
                    out.ops.remove(&q);
                }
            }
        }
        out
    }
}

impl FromIterator<(QubitId, Pauli)> for PauliString {
    fn from_iter<T: IntoIterator<Item = (QubitId, Pauli)>>(iter: T) -> Self {
        Self {
            ops: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ops.is_empty() {
            return write!(f, "I");
        }
        let mut first = true;
        for (q, p) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{p:?}[{q}]")?;
        }
        Ok(())
    }
}
