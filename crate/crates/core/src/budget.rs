//! Expected physical resource counts per logical gate and comparison rows.

use std::fmt;

use crate::circuit::{LogicalGate, ResourceCount};
use crate::compiler::CompiledGate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Exact(usize),
    AtMost(usize),
}

impl Bound {
    pub fn admits(self, v: usize) -> bool {
        match self {
            Bound::Exact(x) => v == x,
            Bound::AtMost(x) => v <= x,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(x) => write!(f, "{x}"),
            Bound::AtMost(x) => write!(f, "<={x}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Expected {
    pub single_qubit: Bound,
    pub two_qubit: Bound,
    pub depth: Bound,
}

impl Expected {
    pub fn admits(&self, r: &ResourceCount) -> bool {
        self.single_qubit.admits(r.single_qubit) && self.two_qubit.admits(r.two_qubit) && self.depth.admits(r.depth)
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.single_qubit, self.two_qubit, self.depth)
    }
}

fn half_up(n: usize) -> usize {
    n.div_ceil(2)
}

/// Line-operator depth `2*ceil(n/2) + 1`.
pub fn line_depth(n: usize) -> usize {
    2 * half_up(n) + 1
}

/// Published resource figures for one lowered logical gate on an `n`-qubit chip.
pub fn expected(g: &LogicalGate, n: usize) -> Expected {
    use Bound::{AtMost, Exact};
    let line = 2 * (n - 1);
    match *g {
        LogicalGate::Rx { .. } => Expected {
            single_qubit: Exact(1),
            two_qubit: Exact(line),
            depth: AtMost(line_depth(n)),
        },
        LogicalGate::X { .. } => Expected {
            single_qubit: Exact(n),
            two_qubit: Exact(0),
            depth: Exact(1),
        },
        LogicalGate::Rz { .. } => Expected {
            single_qubit: Exact(1),
            two_qubit: Exact(0),
            depth: Exact(1),
        },
        LogicalGate::Cp { .. } | LogicalGate::Cz { .. } => Expected {
            single_qubit: Exact(3),
            two_qubit: Exact(0),
            depth: Exact(1),
        },
        // Rz rotations cannot overlap the chains on small chips
        LogicalGate::U { .. } | LogicalGate::H { .. } => Expected {
            single_qubit: Exact(3),
            two_qubit: Exact(line),
            depth: AtMost(line_depth(n) + if n <= 4 { 2 } else { 0 }),
        },
        LogicalGate::Cnot { .. } => Expected {
            single_qubit: Exact(7),
            two_qubit: AtMost(2 * line),
            depth: AtMost(4 * half_up(n) + 3),
        },
    }
}

/// Optimized CNOT count for a logical CNOT.
pub fn cnot_target_count(n: usize, control: usize, target: usize) -> usize {
    2 * (n - 1 + control.abs_diff(target))
}

/// Expected figures for decode, `m` single-qubit unitaries, encode.
pub fn expected_batch(n: usize, m: usize) -> Expected {
    Expected {
        single_qubit: Bound::Exact(3 * m),
        two_qubit: Bound::Exact(2 * n * (n - 1)),
        depth: Bound::Exact(2 * n + 3),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub gate: String,
    pub measured: ResourceCount,
    pub expected: Expected,
    pub matches: bool,
}

pub const CSV_HEADER: &str = "gate,single_qubit,two_qubit,depth,table1_expected,match";

impl ReportRow {
    pub fn from_compiled(g: &CompiledGate, n: usize) -> Self {
        let expected = expected(&g.logical, n);
        Self {
            gate: g.logical.to_string(),
            measured: g.resources,
            expected,
            matches: expected.admits(&g.resources),
        }
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.gate, self.measured.single_qubit, self.measured.two_qubit, self.measured.depth, self.expected, self.matches
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulas() {
        assert_eq!(line_depth(5), 7);
        assert_eq!(line_depth(6), 7);
        assert_eq!(expected(&LogicalGate::Rx { q: 0, angle: 0.0 }, 6).two_qubit, Bound::Exact(10));
        assert_eq!(expected(&LogicalGate::U { q: 0, alpha: 0.0, beta: 0.0, gamma: 0.0 }, 4).depth, Bound::AtMost(7));
        assert_eq!(cnot_target_count(5, 0, 3), 14);
        assert_eq!(expected_batch(4, 4).to_string(), "12/24/11");
    }
}
