//! Logical and physical circuit IR, ASAP scheduling and resource counting.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::qubit::QubitId;

/// Gate on logical qubits. Angles in radians; `U` is `Rz(alpha) Rx(beta) Rz(gamma)`
/// as an operator product, so `gamma` acts first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogicalGate {
    Rx { q: usize, angle: f64 },
    Rz { q: usize, angle: f64 },
    X { q: usize },
    H { q: usize },
    U { q: usize, alpha: f64, beta: f64, gamma: f64 },
    Cp { a: usize, b: usize, angle: f64 },
    Cz { a: usize, b: usize },
    Cnot { control: usize, target: usize },
}

impl LogicalGate {
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            LogicalGate::Rx { q, .. }
            | LogicalGate::Rz { q, .. }
            | LogicalGate::X { q }
            | LogicalGate::H { q }
            | LogicalGate::U { q, .. } => vec![q],
            LogicalGate::Cp { a, b, .. } | LogicalGate::Cz { a, b } => vec![a, b],
            LogicalGate::Cnot { control, target } => vec![control, target],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LogicalGate::Rx { .. } => "RX",
            LogicalGate::Rz { .. } => "RZ",
            LogicalGate::X { .. } => "X",
            LogicalGate::H { .. } => "H",
            LogicalGate::U { .. } => "U",
            LogicalGate::Cp { .. } => "CP",
            LogicalGate::Cz { .. } => "CZ",
            LogicalGate::Cnot { .. } => "CNOT",
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let t = self.targets();
        if let Some(&bad) = t.iter().find(|&&i| i >= n) {
            return Err(Error::LogicalIndex { index: bad, n });
        }
        if t.len() == 2 && t[0] == t[1] {
            return Err(Error::BadGate(format!("{} needs two distinct qubits", self.name())));
        }
        Ok(())
    }
}

impl fmt::Display for LogicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        for t in self.targets() {
            write!(f, " q{t}")?;
        }
        match *self {
            LogicalGate::Rx { angle, .. } | LogicalGate::Rz { angle, .. } | LogicalGate::Cp { angle, .. } => {
                write!(f, " {angle}")
            }
            LogicalGate::U { alpha, beta, gamma, .. } => write!(f, " {alpha} {beta} {gamma}"),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PhysicalGate {
    Cnot { control: QubitId, target: QubitId },
    Rx { q: QubitId, angle: f64 },
    Rz { q: QubitId, angle: f64 },
    X(QubitId),
    H(QubitId),
    Init0(QubitId),
    MeasureZ(QubitId),
}

impl PhysicalGate {
    pub fn cnot(control: QubitId, target: QubitId) -> Self {
        PhysicalGate::Cnot { control, target }
    }

    pub fn rx(q: QubitId, angle: f64) -> Self {
        PhysicalGate::Rx { q, angle }
    }

    pub fn rz(q: QubitId, angle: f64) -> Self {
        PhysicalGate::Rz { q, angle }
    }

    pub fn qubits(&self) -> Vec<QubitId> {
        match *self {
            PhysicalGate::Cnot { control, target } => vec![control, target],
            PhysicalGate::Rx { q, .. }
            | PhysicalGate::Rz { q, .. }
            | PhysicalGate::X(q)
            | PhysicalGate::H(q)
            | PhysicalGate::Init0(q)
            | PhysicalGate::MeasureZ(q) => vec![q],
        }
    }

    pub fn touches(&self, q: &QubitId) -> bool {
        match self {
            PhysicalGate::Cnot { control, target } => control == q || target == q,
            PhysicalGate::Rx { q: p, .. }
            | PhysicalGate::Rz { q: p, .. }
            | PhysicalGate::X(p)
            | PhysicalGate::H(p)
            | PhysicalGate::Init0(p)
            | PhysicalGate::MeasureZ(p) => p == q,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PhysicalGate::Cnot { .. } => "CNOT",
            PhysicalGate::Rx { .. } => "RX",
            PhysicalGate::Rz { .. } => "RZ",
            PhysicalGate::X(_) => "X",
            PhysicalGate::H(_) => "H",
            PhysicalGate::Init0(_) => "INIT0",
            PhysicalGate::MeasureZ(_) => "MEASZ",
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, PhysicalGate::Init0(_) | PhysicalGate::MeasureZ(_))
    }

    pub fn is_single_qubit_unitary(&self) -> bool {
        matches!(
            self,
            PhysicalGate::Rx { .. } | PhysicalGate::Rz { .. } | PhysicalGate::X(_) | PhysicalGate::H(_)
        )
    }

    /// Diagonal in the computational basis.
    pub fn is_z_diagonal(&self) -> bool {
        matches!(self, PhysicalGate::Rz { .. })
    }

    pub fn inverse(&self) -> Result<PhysicalGate> {
        Ok(match *self {
            PhysicalGate::Rx { q, angle } => PhysicalGate::Rx { q, angle: -angle },
            PhysicalGate::Rz { q, angle } => PhysicalGate::Rz { q, angle: -angle },
            g @ (PhysicalGate::Cnot { .. } | PhysicalGate::X(_) | PhysicalGate::H(_)) => g,
            g => return Err(Error::NonUnitary(g.to_string())),
        })
    }
}

impl fmt::Display for PhysicalGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhysicalGate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            PhysicalGate::Rx { q, angle } => write!(f, "RX {q} {angle:?}"),
            PhysicalGate::Rz { q, angle } => write!(f, "RZ {q} {angle:?}"),
            g => write!(f, "{} {}", g.name(), g.qubits()[0]),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LogicalCircuit {
    pub n: usize,
    pub name: String,
    pub gates: Vec<LogicalGate>,
}

impl LogicalCircuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            name: String::new(),
            gates: Vec::new(),
        }
    }

    pub fn with_gates(n: usize, gates: Vec<LogicalGate>) -> Self {
        Self {
            n,
            name: String::new(),
            gates,
        }
    }

    pub fn push(&mut self, g: LogicalGate) -> &mut Self {
        self.gates.push(g);
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.validate(self.n))
    }
}

/// Gate list over the physical qubits of the `n`-logical-qubit layout.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PhysicalCircuit {
    pub n: usize,
    pub name: String,
    pub gates: Vec<PhysicalGate>,
}

impl PhysicalCircuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            name: String::new(),
            gates: Vec::new(),
        }
    }

    pub fn with_gates(n: usize, gates: Vec<PhysicalGate>) -> Self {
        Self {
            n,
            name: String::new(),
            gates,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn push(&mut self, g: PhysicalGate) {
        self.gates.push(g);
    }

    pub fn extend(&mut self, other: &PhysicalCircuit) {
        self.gates.extend_from_slice(&other.gates);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, PhysicalGate::Cnot { .. }))
            .count()
    }

    /// Ancillas used by the circuit, sorted.
    pub fn ancillas(&self) -> Vec<QubitId> {
        let mut a: Vec<QubitId> = self
            .gates
            .iter()
            .flat_map(|g| g.qubits())
            .filter(QubitId::is_ancilla)
            .collect();
        a.sort();
        a.dedup();
        a
    }

    /// Checks operands exist in `layout` and CNOTs have distinct operands.
    pub fn validate(&self, layout: &Layout) -> Result<()> {
        for g in &self.gates {
            for q in g.qubits() {
                if !layout.admits(&q) {
                    return Err(Error::UnknownQubit(q));
                }
            }
            if let PhysicalGate::Cnot { control, target } = g {
                if control == target {
                    return Err(Error::BadGate(format!("CNOT with control = target = {control}")));
                }
            }
        }
        Ok(())
    }

    pub fn is_unitary(&self) -> bool {
        self.gates.iter().all(PhysicalGate::is_unitary)
    }
}

/// Reverses the gate list and inverts every gate.
pub fn invert(c: &PhysicalCircuit) -> Result<PhysicalCircuit> {
    let gates = c
        .gates
        .iter()
        .rev()
        .map(PhysicalGate::inverse)
        .collect::<Result<Vec<_>>>()?;
    Ok(PhysicalCircuit {
        n: c.n,
        name: c.name.clone(),
        gates,
    })
}

/// Parallel layers of gate indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    pub layers: Vec<Vec<usize>>,
}

impl Schedule {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Layer index of every gate.
    pub fn layer_of(&self) -> Vec<usize> {
        let total = self.layers.iter().map(Vec::len).sum();
        let mut out = vec![0; total];
        for (l, layer) in self.layers.iter().enumerate() {
            for &g in layer {
                out[g] = l;
            }
        }
        out
    }

    fn place(&mut self, layer: usize, gate: usize) {
        if self.layers.len() <= layer {
            self.layers.resize_with(layer + 1, Vec::new);
        }
        self.layers[layer].push(gate);
    }
}

/// Greedy ASAP layering: every gate goes to the first layer after the last
/// gate sharing an operand with it.
pub fn schedule(c: &PhysicalCircuit) -> Schedule {
    let mut next_free: HashMap<QubitId, usize> = HashMap::new();
    let mut s = Schedule::default();
    for (idx, g) in c.gates.iter().enumerate() {
        let qs = g.qubits();
        let layer = qs.iter().map(|q| next_free.get(q).copied().unwrap_or(0)).max().unwrap_or(0);
        s.place(layer, idx);
        for q in qs {
            next_free.insert(q, layer + 1);
        }
    }
    s
}

/// ASAP layering in which a run of consecutive single-qubit unitaries on one
/// qubit occupies a single time step. Gates of one run share a layer.
pub fn merged_schedule(c: &PhysicalCircuit) -> Schedule {
    let mut next_free: HashMap<QubitId, usize> = HashMap::new();
    // qubit -> layer of the open single-qubit run
    let mut open_run: HashMap<QubitId, usize> = HashMap::new();
    let mut s = Schedule::default();
    for (idx, g) in c.gates.iter().enumerate() {
        let qs = g.qubits();
        if g.is_single_qubit_unitary() {
            if let Some(&layer) = open_run.get(&qs[0]) {
                s.place(layer, idx);
                continue;
            }
        }
        let layer = qs.iter().map(|q| next_free.get(q).copied().unwrap_or(0)).max().unwrap_or(0);
        s.place(layer, idx);
        for q in qs {
            next_free.insert(q, layer + 1);
            if g.is_single_qubit_unitary() {
                open_run.insert(q, layer);
            } else {
                open_run.remove(&q);
            }
        }
    }
    s
}

/// Number of single-qubit unitaries left after fusing same-axis rotations
/// that can be brought together by commuting: `Rz` moves freely across CNOTs
/// it controls, `Rx` across CNOTs it targets.
pub fn fused_single_qubit_count(c: &PhysicalCircuit) -> usize {
    #[derive(Clone, Copy, Default)]
    struct Open {
        z: bool,
        x: bool,
    }
    let mut open: HashMap<QubitId, Open> = HashMap::new();
    let mut count = 0;
    for g in &c.gates {
        match *g {
            PhysicalGate::Rz { q, .. } => {
                let o = open.entry(q).or_default();
                if !o.z {
                    count += 1;
                }
                *o = Open { z: true, x: false };
            }
            PhysicalGate::Rx { q, .. } => {
                let o = open.entry(q).or_default();
                if !o.x {
                    count += 1;
                }
                *o = Open { z: false, x: true };
            }
            PhysicalGate::X(q) | PhysicalGate::H(q) => {
                count += 1;
                open.insert(q, Open::default());
            }
            PhysicalGate::Init0(q) | PhysicalGate::MeasureZ(q) => {
                open.insert(q, Open::default());
            }
            PhysicalGate::Cnot { control, target } => {
                open.entry(control).or_default().x = false;
                open.entry(target).or_default().z = false;
            }
        }
    }
    count
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ResourceCount {
    pub single_qubit: usize,
    pub two_qubit: usize,
    /// Depth under the selected metric.
    pub depth: usize,
    /// Depth with every gate a unit step.
    pub raw_depth: usize,
}

/// Gate counts and depth. With `merge_1q` the single-qubit count is taken
/// after rotation fusion and the depth after merging single-qubit runs.
pub fn count_resources(c: &PhysicalCircuit, merge_1q: bool) -> ResourceCount {
    let raw_depth = schedule(c).depth();
    let raw_single = c.gates.iter().filter(|g| g.is_single_qubit_unitary()).count();
    let (single_qubit, depth) = if merge_1q {
        (fused_single_qubit_count(c), merged_schedule(c).depth())
    } else {
        (raw_single, raw_depth)
    };
    ResourceCount {
        single_qubit,
        two_qubit: c.cnot_count(),
        depth,
        raw_depth,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalityViolation {
    pub index: usize,
    pub gate: PhysicalGate,
}

/// Every CNOT whose operands are not lattice neighbors (or not on the chip).
pub fn validate_locality(c: &PhysicalCircuit, layout: &Layout) -> Vec<LocalityViolation> {
    c.gates
        .iter()
        .enumerate()
        .filter_map(|(index, g)| match g {
            PhysicalGate::Cnot { control, target } => {
                let ok = layout.are_neighbors(control, target).unwrap_or(false);
                (!ok).then_some(LocalityViolation { index, gate: *g })
            }
            _ => None,
        })
        .collect()
}
