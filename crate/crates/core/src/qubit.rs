//! Physical qubit labels and lattice coordinates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Label of a physical qubit.
///
/// `Data(i)` carries logical qubit `i` directly, `Parity(i, j)` carries the
/// parity of logical qubits `i < j`. `Ancilla(c)` is a syndrome ancilla bound
/// to constraint `c`; it never belongs to a layout's qubit set.
///
/// The derived ordering is the canonical simulator ordering: data qubits by
/// index, then parity qubits lexicographically, then ancillas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitId {
    Data(usize),
    Parity(usize, usize),
    Ancilla(usize),
}

impl QubitId {
    /// Parity qubit for an unordered pair of distinct logical indices.
    pub fn parity(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        QubitId::Parity(a.min(b), a.max(b))
    }

    /// Logical indices appearing in the label.
    pub fn logical_indices(&self) -> Vec<usize> {
        match *self {
            QubitId::Data(i) => vec![i],
            QubitId::Parity(i, j) => vec![i, j],
            QubitId::Ancilla(_) => vec![],
        }
    }

    pub fn contains_index(&self, k: usize) -> bool {
        match *self {
            QubitId::Data(i) => i == k,
            QubitId::Parity(i, j) => i == k || j == k,
            QubitId::Ancilla(_) => false,
        }
    }

    pub fn is_data(&self) -> bool {
        matches!(self, QubitId::Data(_))
    }

    pub fn is_ancilla(&self) -> bool {
        matches!(self, QubitId::Ancilla(_))
    }
}

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QubitId::Data(i) => write!(f, "d{i}"),
            QubitId::Parity(i, j) => write!(f, "p{i}_{j}"),
            QubitId::Ancilla(c) => write!(f, "a{c}"),
        }
    }
}

impl FromStr for QubitId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::BadToken(s.to_string());
        let num = |t: &str| t.parse::<usize>().map_err(|_| bad());
        let (head, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        match head {
            "d" => Ok(QubitId::Data(num(rest)?)),
            "a" => Ok(QubitId::Ancilla(num(rest)?)),
            "p" => {
                let (i, j) = rest.split_once('_').ok_or_else(bad)?;
                let (i, j) = (num(i)?, num(j)?);
                if i >= j {
                    return Err(bad());
                }
                Ok(QubitId::Parity(i, j))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for QubitId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QubitId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Integer lattice position. Qubit sites satisfy `x + y` even; plaquette
/// centers (ancilla sites) have `x + y` odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coordinate {
    pub x: i64,
    pub y: i64,
}

impl Coordinate {
    pub fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Diagonal-grid adjacency between qubit sites.
    pub fn is_diagonal_neighbor(&self, other: &Coordinate) -> bool {
        (self.x - other.x).abs() == 1 && (self.y - other.y).abs() == 1
    }

    /// Axis adjacency, used between a plaquette center and its corners.
    pub fn is_axis_neighbor(&self, other: &Coordinate) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_round_trip() {
        for q in [QubitId::Data(3), QubitId::Parity(0, 12), QubitId::Ancilla(7)] {
            assert_eq!(q.to_string().parse::<QubitId>().unwrap(), q);
        }
    }

    #[test]
    fn rejects_malformed_tokens() {
        for t in ["", "x1", "d", "p1", "p2_1", "p1_1", "d-1", "p0_a"] {
            assert!(t.parse::<QubitId>().is_err(), "{t}");
        }
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![
            QubitId::Ancilla(0),
            QubitId::Parity(1, 2),
            QubitId::Data(2),
            QubitId::Parity(0, 2),
            QubitId::Data(0),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                QubitId::Data(0),
                QubitId::Data(2),
                QubitId::Parity(0, 2),
                QubitId::Parity(1, 2),
                QubitId::Ancilla(0)
            ]
        );
    }
}
