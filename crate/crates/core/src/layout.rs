//! The extended LHZ chip: data row, parity triangle, plaquette constraints
//! and logical lines.
//!
//! Geometry: `Data(i)` sits at `(2i, 0)` and `Parity(i, j)` at
//! `(i + j, j - i)`. Qubits are neighbors when they differ by one step in
//! both coordinates, so `Parity(i, j)` touches `Parity(i ± 1, j)` and
//! `Parity(i, j ± 1)`, and `Parity(i, i + 1)` touches both `Data(i)` and
//! `Data(i + 1)`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qubit::{Coordinate, QubitId};

/// Geometric family a constraint belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintKind {
    /// `{Data(i), Data(i+1), Parity(i, i+1)}`
    DataTriangle,
    /// `{Parity(i, i+1), Parity(i+1, i+2), Parity(i, i+2)}`
    RowTriangle,
    /// `{Parity(i, j), Parity(i-1, j), Parity(i, j+1), Parity(i-1, j+1)}`
    Diamond,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub id: usize,
    pub kind: ConstraintKind,
    /// Members in canonical order.
    pub qubits: Vec<QubitId>,
    apex: QubitId,
}

impl Constraint {
    /// Builds a constraint from an arbitrary member list, checking size and
    /// the even-multiplicity rule. The apex is the member highest on the chip.
    pub fn new(id: usize, mut qubits: Vec<QubitId>) -> Result<Self> {
        qubits.sort();
        qubits.dedup();
        if !(3..=4).contains(&qubits.len()) {
            return Err(Error::BadConstraint(format!(
                "needs 3 or 4 distinct qubits, got {}",
                qubits.len()
            )));
        }
        if let Some(q) = qubits.iter().find(|q| q.is_ancilla()) {
            return Err(Error::BadConstraint(format!("ancilla {q} cannot be a member")));
        }
        if !has_even_index_multiplicity(&qubits) {
            return Err(Error::BadConstraint(format!(
                "logical indices of {qubits:?} do not pair up"
            )));
        }
        let kind = match (qubits.len(), qubits.iter().filter(|q| q.is_data()).count()) {
            (3, 2) => ConstraintKind::DataTriangle,
            (3, 0) => ConstraintKind::RowTriangle,
            (4, 0) => ConstraintKind::Diamond,
            _ => {
                return Err(Error::BadConstraint(format!(
                    "{qubits:?} is not a triangle or diamond"
                )))
            }
        };
        let apex = *qubits
            .iter()
            .max_by_key(|q| (coordinate_of(q).y, std::cmp::Reverse(**q)))
            .expect("non-empty");
        Ok(Self {
            id,
            kind,
            qubits,
            apex,
        })
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn contains(&self, q: &QubitId) -> bool {
        self.qubits.contains(q)
    }

    /// The member that incremental encoding fills in last: the top corner.
    pub fn apex(&self) -> QubitId {
        self.apex
    }

    /// Z-type stabilizer supported on the members.
    pub fn parity_operator(&self) -> PauliString {
        PauliString::z_on(self.qubits.iter().copied())
    }

    /// Plaquette center; every member is an axis neighbor of it.
    pub fn center(&self) -> Coordinate {
        let cs: Vec<Coordinate> = self.qubits.iter().map(coordinate_of).collect();
        match self.kind {
            // corners at (x-1, 0), (x+1, 0), (x, 1)
            ConstraintKind::DataTriangle => {
                let top = cs.iter().max_by_key(|c| c.y).unwrap();
                Coordinate::new(top.x, 0)
            }
            // corners at (x-1, 1), (x+1, 1), (x, 2)
            ConstraintKind::RowTriangle => {
                let top = cs.iter().max_by_key(|c| c.y).unwrap();
                Coordinate::new(top.x, top.y - 1)
            }
            ConstraintKind::Diamond => {
                let sx: i64 = cs.iter().map(|c| c.x).sum();
                let sy: i64 = cs.iter().map(|c| c.y).sum();
                Coordinate::new(sx / 4, sy / 4)
            }
        }
    }
}

/// Constraint operator for a constraint; mirrors [`Constraint::parity_operator`].
pub fn constraint_parity_operator(c: &Constraint) -> PauliString {
    c.parity_operator()
}

fn has_even_index_multiplicity(qubits: &[QubitId]) -> bool {
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for q in qubits {
        for i in q.logical_indices() {
            *counts.entry(i).or_default() += 1;
        }
    }
    counts.values().all(|c| c % 2 == 0)
}

/// Lattice coordinate of a data or parity qubit. Ancillas have no fixed
/// position outside a layout; see [`Layout::coordinate`].
pub fn coordinate_of(q: &QubitId) -> Coordinate {
    match *q {
        QubitId::Data(i) => Coordinate::new(2 * i as i64, 0),
        QubitId::Parity(i, j) => Coordinate::new((i + j) as i64, j as i64 - i as i64),
        QubitId::Ancilla(_) => Coordinate::new(-1, -1),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LogicalLine {
    pub logical_index: usize,
    pub path: Vec<QubitId>,
}

impl LogicalLine {
    /// Position of the data qubit inside the path (equals the logical index).
    pub fn data_position(&self) -> usize {
        self.logical_index
    }

    /// Middle of the path, rounded down.
    pub fn center_position(&self) -> usize {
        (self.path.len() - 1) / 2
    }

    pub fn x_operator(&self) -> PauliString {
        PauliString::x_on(self.path.iter().copied())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    n: usize,
    qubits: Vec<QubitId>,
    coords: HashMap<QubitId, Coordinate>,
    constraints: Vec<Constraint>,
    lines: Vec<LogicalLine>,
}

/// Builds the full extended layout for `n` logical qubits.
pub fn build_layout(n: usize) -> Result<Layout> {
    Layout::new(n)
}

impl Layout {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewLogical(n));
        }
        let mut qubits: Vec<QubitId> = (0..n).map(QubitId::Data).collect();
        for i in 0..n {
            for j in i + 1..n {
                qubits.push(QubitId::Parity(i, j));
            }
        }
        qubits.sort();
        let coords = qubits.iter().map(|q| (*q, coordinate_of(q))).collect();

        let mut members: Vec<Vec<QubitId>> = Vec::new();
        for i in 0..n - 1 {
            members.push(vec![QubitId::Data(i), QubitId::Data(i + 1), QubitId::Parity(i, i + 1)]);
        }
        for i in 0..n.saturating_sub(2) {
            members.push(vec![
                QubitId::Parity(i, i + 1),
                QubitId::Parity(i + 1, i + 2),
                QubitId::Parity(i, i + 2),
            ]);
        }
        for i in 1..n.saturating_sub(1) {
            for j in i + 1..n - 1 {
                members.push(vec![
                    QubitId::Parity(i, j),
                    QubitId::Parity(i - 1, j),
                    QubitId::Parity(i, j + 1),
                    QubitId::Parity(i - 1, j + 1),
                ]);
            }
        }
        let constraints = members
            .into_iter()
            .enumerate()
            .map(|(id, m)| Constraint::new(id, m))
            .collect::<Result<Vec<_>>>()?;

        let lines = (0..n)
            .map(|i| LogicalLine {
                logical_index: i,
                path: line_path(n, i),
            })
            .collect();

        Ok(Self {
            n,
            qubits,
            coords,
            constraints,
            lines,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of physical qubits, `n(n+1)/2`.
    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// Qubits in canonical order.
    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn parity_qubits(&self) -> impl Iterator<Item = QubitId> + '_ {
        self.qubits.iter().copied().filter(|q| !q.is_data())
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, id: usize) -> Option<&Constraint> {
        self.constraints.get(id)
    }

    pub fn lines(&self) -> &[LogicalLine] {
        &self.lines
    }

    pub fn contains(&self, q: &QubitId) -> bool {
        self.coords.contains_key(q)
    }

    /// Whether `q` may appear in a physical circuit over this layout:
    /// a chip qubit or the ancilla of an existing constraint.
    pub fn admits(&self, q: &QubitId) -> bool {
        match q {
            QubitId::Ancilla(c) => *c < self.constraints.len(),
            _ => self.contains(q),
        }
    }

    pub fn check_logical(&self, i: usize) -> Result<()> {
        if i < self.n {
            Ok(())
        } else {
            Err(Error::LogicalIndex { index: i, n: self.n })
        }
    }

    pub fn coordinate(&self, q: &QubitId) -> Result<Coordinate> {
        match q {
            QubitId::Ancilla(c) => self
                .constraints
                .get(*c)
                .map(Constraint::center)
                .ok_or(Error::UnknownQubit(*q)),
            _ => self.coords.get(q).copied().ok_or(Error::UnknownQubit(*q)),
        }
    }

    pub fn logical_line(&self, i: usize) -> Result<&LogicalLine> {
        self.check_logical(i)?;
        Ok(&self.lines[i])
    }

    /// Diagonal adjacency between chip qubits. An ancilla is adjacent to the
    /// members of its own plaquette.
    pub fn are_neighbors(&self, a: &QubitId, b: &QubitId) -> Result<bool> {
        let ca = self.coordinate(a)?;
        let cb = self.coordinate(b)?;
        Ok(match (a, b) {
            (QubitId::Ancilla(_), QubitId::Ancilla(_)) => false,
            (QubitId::Ancilla(c), q) | (q, QubitId::Ancilla(c)) => {
                self.constraints[*c].contains(q) && ca.is_axis_neighbor(&cb)
            }
            _ => ca.is_diagonal_neighbor(&cb),
        })
    }

    /// Constraints that contain `q`.
    pub fn constraints_of<'a>(&'a self, q: &'a QubitId) -> impl Iterator<Item = &'a Constraint> + 'a {
        self.constraints.iter().filter(move |c| c.contains(q))
    }

    pub fn to_doc(&self) -> LayoutDoc {
        LayoutDoc {
            n: self.n,
            qubits: self
                .qubits
                .iter()
                .map(|q| QubitEntry {
                    id: *q,
                    x: self.coords[q].x,
                    y: self.coords[q].y,
                })
                .collect(),
            constraints: self
                .constraints
                .iter()
                .map(|c| ConstraintEntry {
                    id: c.id,
                    kind: c.kind,
                    qubits: c.qubits.clone(),
                })
                .collect(),
            lines: self.lines.clone(),
        }
    }

    /// Rebuilds a layout from its serialized form, checking it describes the
    /// canonical chip for its `n`.
    pub fn from_doc(doc: &LayoutDoc) -> Result<Self> {
        let mut coords = HashMap::new();
        for e in &doc.qubits {
            coords.insert(e.id, Coordinate::new(e.x, e.y));
        }
        let mut qubits: Vec<QubitId> = doc.qubits.iter().map(|e| e.id).collect();
        qubits.sort();
        let constraints = doc
            .constraints
            .iter()
            .map(|c| Constraint::new(c.id, c.qubits.clone()))
            .collect::<Result<Vec<_>>>()?;
        let parsed = Self {
            n: doc.n,
            qubits,
            coords,
            constraints,
            lines: doc.lines.clone(),
        };
        let canonical = Self::new(doc.n)?;
        if parsed != canonical {
            return Err(Error::Parse {
                location: "layout".into(),
                message: format!("document does not describe the n = {} layout", doc.n),
            });
        }
        Ok(parsed)
    }
}

fn line_path(n: usize, i: usize) -> Vec<QubitId> {
    let mut path: Vec<QubitId> = (0..i).map(|k| QubitId::Parity(k, i)).collect();
    path.push(QubitId::Data(i));
    path.extend((i + 1..n).map(|k| QubitId::Parity(i, k)));
    path
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitEntry {
    pub id: QubitId,
    pub x: i64,
    pub y: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintEntry {
    pub id: usize,
    pub kind: ConstraintKind,
    pub qubits: Vec<QubitId>,
}

/// JSON shape of a layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutDoc {
    pub n: usize,
    pub qubits: Vec<QubitEntry>,
    pub constraints: Vec<ConstraintEntry>,
    pub lines: Vec<LogicalLine>,
}
