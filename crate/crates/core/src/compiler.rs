//! Lowering of logical gates to nearest-neighbor physical circuits.
//!
//! Diagonal gates act directly: `Rz` on a data qubit, controlled phase as
//! three parallel `Rz`. Non-diagonal gates fold the X-parity of a logical
//! line onto one site with a CNOT chain, rotate there, and unfold. In the
//! fold every CNOT points from the inner qubit to the outer one, so
//! conjugating `X(site)` by the chain yields `X` on the whole line, while
//! `Z(site)` is left alone.

use rayon::prelude::*;

use crate::circuit::{
    count_resources, merged_schedule, schedule, LogicalCircuit, LogicalGate, PhysicalCircuit,
    PhysicalGate, ResourceCount, Schedule,
};
use crate::codec::{decode_full, encode_full};
use crate::error::{Error, Result};
use crate::layout::{Layout, LogicalLine};
use crate::peephole::peephole;
use crate::qubit::QubitId;

use std::f64::consts::{FRAC_PI_2, PI};

/// Where the rotation of a folded line operator is applied.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RotationSite {
    /// Middle of the line; both CNOT arms run in parallel.
    #[default]
    Center,
    /// The line's data qubit.
    Data,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LoweringOptions {
    pub rotation_site: RotationSite,
    pub peephole: bool,
}

impl LoweringOptions {
    pub fn new(rotation_site: RotationSite, peephole: bool) -> Self {
        Self { rotation_site, peephole }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledGate {
    pub logical: LogicalGate,
    pub physical: PhysicalCircuit,
    /// Merged metric (rotation fusion, single-qubit runs as one step).
    pub resources: ResourceCount,
}

impl CompiledGate {
    fn new(logical: LogicalGate, physical: PhysicalCircuit) -> Self {
        let resources = count_resources(&physical, true);
        Self {
            logical,
            physical,
            resources,
        }
    }
}

/// Euler angles of `Rz(alpha) Rx(beta) Rz(gamma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Euler {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Euler {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha, beta, gamma }
    }
}

/// CNOT chain gathering the X-parity of `line` onto `line.path[site]`.
pub fn fold_chain(line: &LogicalLine, site: usize) -> Vec<PhysicalGate> {
    let path = &line.path;
    let mut gates = Vec::with_capacity(path.len().saturating_sub(1));
    for k in 0..site {
        gates.push(PhysicalGate::cnot(path[k + 1], path[k]));
    }
    for k in (site + 1..path.len()).rev() {
        gates.push(PhysicalGate::cnot(path[k - 1], path[k]));
    }
    gates
}

fn site_position(line: &LogicalLine, site: RotationSite) -> usize {
    match site {
        RotationSite::Center => line.center_position(),
        RotationSite::Data => line.data_position(),
    }
}

/// `fold ++ body ++ reverse(fold)`.
fn sandwich(n: usize, fold: &[PhysicalGate], body: &[PhysicalGate]) -> PhysicalCircuit {
    let mut gates = fold.to_vec();
    gates.extend_from_slice(body);
    gates.extend(fold.iter().rev().copied());
    PhysicalCircuit::with_gates(n, gates)
}

fn finish(c: PhysicalCircuit, opts: LoweringOptions) -> PhysicalCircuit {
    if opts.peephole {
        peephole(&c)
    } else {
        c
    }
}

pub fn compile_rz(layout: &Layout, i: usize, theta: f64) -> Result<CompiledGate> {
    layout.check_logical(i)?;
    let c = PhysicalCircuit::with_gates(layout.n(), vec![PhysicalGate::rz(QubitId::Data(i), theta)]);
    Ok(CompiledGate::new(LogicalGate::Rz { q: i, angle: theta }, c))
}

pub fn compile_rx(layout: &Layout, i: usize, alpha: f64, opts: LoweringOptions) -> Result<CompiledGate> {
    let line = layout.logical_line(i)?;
    let site = site_position(line, opts.rotation_site);
    let fold = fold_chain(line, site);
    let c = sandwich(layout.n(), &fold, &[PhysicalGate::rx(line.path[site], alpha)]);
    Ok(CompiledGate::new(LogicalGate::Rx { q: i, angle: alpha }, finish(c, opts)))
}

pub fn compile_x(layout: &Layout, i: usize) -> Result<CompiledGate> {
    let line = layout.logical_line(i)?;
    let c = PhysicalCircuit::with_gates(layout.n(), line.path.iter().map(|q| PhysicalGate::X(*q)).collect());
    Ok(CompiledGate::new(LogicalGate::X { q: i }, c))
}

pub fn compile_cp(layout: &Layout, i: usize, j: usize, phi: f64) -> Result<CompiledGate> {
    layout.check_logical(i)?;
    layout.check_logical(j)?;
    if i == j {
        return Err(Error::BadGate("controlled phase needs two distinct qubits".into()));
    }
    let c = PhysicalCircuit::with_gates(
        layout.n(),
        vec![
            PhysicalGate::rz(QubitId::Data(i), phi / 2.0),
            PhysicalGate::rz(QubitId::parity(i, j), -phi / 2.0),
            PhysicalGate::rz(QubitId::Data(j), phi / 2.0),
        ],
    );
    Ok(CompiledGate::new(LogicalGate::Cp { a: i, b: j, angle: phi }, c))
}

/// U with the three rotations on the data qubit inside one fold.
fn u_on_data(layout: &Layout, i: usize, e: Euler) -> Result<PhysicalCircuit> {
    let line = layout.logical_line(i)?;
    let d = QubitId::Data(i);
    let fold = fold_chain(line, line.data_position());
    Ok(sandwich(
        layout.n(),
        &fold,
        &[PhysicalGate::rz(d, e.gamma), PhysicalGate::rx(d, e.beta), PhysicalGate::rz(d, e.alpha)],
    ))
}

/// U as `Rz` on the data qubit, a folded `Rx` at `site`, `Rz` on the data qubit.
fn u_split(layout: &Layout, i: usize, e: Euler, site: usize) -> Result<PhysicalCircuit> {
    let line = layout.logical_line(i)?;
    let d = QubitId::Data(i);
    let fold = fold_chain(line, site);
    let mut c = PhysicalCircuit::with_gates(layout.n(), vec![PhysicalGate::rz(d, e.gamma)]);
    c.extend(&sandwich(layout.n(), &fold, &[PhysicalGate::rx(line.path[site], e.beta)]));
    c.push(PhysicalGate::rz(d, e.alpha));
    Ok(c)
}

/// Arbitrary single-qubit unitary `Rz(alpha) Rx(beta) Rz(gamma)`.
///
/// With [`RotationSite::Data`] all three rotations sit on the data qubit
/// between the chains. With [`RotationSite::Center`] the `Rz` pair stays on
/// the data qubit outside the chains (where `Z(data)` is the logical `Z`) and
/// the `Rx` moves to whichever line position gives the shallowest schedule,
/// letting the `Rz` overlap with chain CNOTs.
pub fn compile_u(layout: &Layout, i: usize, e: Euler, opts: LoweringOptions) -> Result<CompiledGate> {
    let logical = LogicalGate::U {
        q: i,
        alpha: e.alpha,
        beta: e.beta,
        gamma: e.gamma,
    };
    let c = match opts.rotation_site {
        RotationSite::Data => u_on_data(layout, i, e)?,
        RotationSite::Center => {
            let line = layout.logical_line(i)?;
            let mid = line.center_position();
            let mut best: Option<(usize, usize, PhysicalCircuit)> = None;
            for site in 0..line.path.len() {
                let c = u_split(layout, i, e, site)?;
                let depth = merged_schedule(&c).depth();
                let key = (depth, site.abs_diff(mid));
                if best.as_ref().is_none_or(|(d, off, _)| key < (*d, *off)) {
                    best = Some((key.0, key.1, c));
                }
            }
            best.expect("line has at least two qubits").2
        }
    };
    Ok(CompiledGate::new(logical, finish(c, opts)))
}

/// Hadamard as `Rz(pi/2) Rx(pi/2) Rz(pi/2)`, equal to H up to global phase.
pub fn compile_h(layout: &Layout, i: usize, opts: LoweringOptions) -> Result<CompiledGate> {
    let mut g = compile_u(layout, i, Euler::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2), opts)?;
    g.logical = LogicalGate::H { q: i };
    Ok(g)
}

/// Logical CNOT as `H(t) CZ(c, t) H(t)`, both Hadamards folded onto `Data(t)`
/// so the `Rz` of the controlled phase on `Data(t)` fuses with theirs. The
/// peephole pass then cancels the chain CNOTs not blocked by the `Rz` on the
/// shared parity qubit.
pub fn compile_cnot(layout: &Layout, control: usize, target: usize, opts: LoweringOptions) -> Result<CompiledGate> {
    if control == target {
        return Err(Error::BadGate("CNOT needs distinct control and target".into()));
    }
    let h = u_on_data(layout, target, Euler::new(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2))?;
    let cz = compile_cp(layout, control, target, PI)?.physical;
    let mut c = h.clone();
    c.extend(&cz);
    c.extend(&h);
    Ok(CompiledGate::new(LogicalGate::Cnot { control, target }, finish(c, opts)))
}

/// Product of single-qubit unitaries on distinct logical qubits: decode the
/// chip, rotate the data qubits, encode again.
pub fn compile_parallel_unitaries(layout: &Layout, ops: &[(usize, Euler)]) -> Result<PhysicalCircuit> {
    let mut seen = vec![false; layout.n()];
    for &(i, _) in ops {
        layout.check_logical(i)?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::DuplicateIndex(i));
        }
    }
    let mut c = decode_full(layout).circuit;
    for &(i, e) in ops {
        let d = QubitId::Data(i);
        c.push(PhysicalGate::rz(d, e.gamma));
        c.push(PhysicalGate::rx(d, e.beta));
        c.push(PhysicalGate::rz(d, e.alpha));
    }
    c.extend(&encode_full(layout).circuit);
    c.name = format!("parallel_u_m{}", ops.len());
    Ok(c)
}

/// Lowers one logical gate.
pub fn compile_gate(layout: &Layout, g: &LogicalGate, opts: LoweringOptions) -> Result<CompiledGate> {
    g.validate(layout.n())?;
    let mut out = match *g {
        LogicalGate::Rx { q, angle } => compile_rx(layout, q, angle, opts)?,
        LogicalGate::Rz { q, angle } => compile_rz(layout, q, angle)?,
        LogicalGate::X { q } => compile_x(layout, q)?,
        LogicalGate::H { q } => compile_h(layout, q, opts)?,
        LogicalGate::U { q, alpha, beta, gamma } => compile_u(layout, q, Euler::new(alpha, beta, gamma), opts)?,
        LogicalGate::Cp { a, b, angle } => compile_cp(layout, a, b, angle)?,
        LogicalGate::Cz { a, b } => compile_cp(layout, a, b, PI)?,
        LogicalGate::Cnot { control, target } => compile_cnot(layout, control, target, opts)?,
    };
    out.logical = *g;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledCircuit {
    pub physical: PhysicalCircuit,
    pub schedule: Schedule,
}

/// Concatenates per-gate lowerings (computed in parallel, joined in order),
/// optionally runs a global peephole pass, and schedules the result.
pub fn compile_circuit(layout: &Layout, logical: &LogicalCircuit, opts: LoweringOptions) -> Result<CompiledCircuit> {
    if logical.n != layout.n() {
        return Err(Error::BadGate(format!(
            "circuit is over {} logical qubits, layout over {}",
            logical.n,
            layout.n()
        )));
    }
    let pieces = logical
        .gates
        .par_iter()
        .map(|g| compile_gate(layout, g, opts))
        .collect::<Result<Vec<_>>>()?;
    let mut physical = PhysicalCircuit::new(layout.n());
    physical.name = logical.name.clone();
    for p in &pieces {
        physical.extend(&p.physical);
    }
    let physical = finish(physical, opts);
    let schedule = schedule(&physical);
    Ok(CompiledCircuit { physical, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::validate_locality;
    use crate::layout::build_layout;
    use QubitId::{Data as D, Parity as P};

    #[test]
    fn rz_is_single_gate() {
        let l = build_layout(3).unwrap();
        let g = compile_rz(&l, 0, FRAC_PI_2).unwrap();
        assert_eq!(g.physical.gates, vec![PhysicalGate::rz(D(0), FRAC_PI_2)]);
        assert_eq!((g.resources.single_qubit, g.resources.two_qubit, g.resources.depth), (1, 0, 1));
    }

    #[test]
    fn rx_n2() {
        let l = build_layout(2).unwrap();
        let g = compile_rx(&l, 0, 0.3, LoweringOptions::default()).unwrap();
        assert_eq!(
            g.physical.gates,
            vec![
                PhysicalGate::cnot(D(0), P(0, 1)),
                PhysicalGate::rx(D(0), 0.3),
                PhysicalGate::cnot(D(0), P(0, 1))
            ]
        );
        assert_eq!(g.resources.depth, 3);
    }

    #[test]
    fn x_flips_whole_line() {
        let l = build_layout(3).unwrap();
        let g = compile_x(&l, 1).unwrap();
        let qs: Vec<QubitId> = g.physical.gates.iter().map(|g| g.qubits()[0]).collect();
        assert_eq!(qs, vec![P(0, 1), D(1), P(1, 2)]);
        assert_eq!((g.resources.single_qubit, g.resources.two_qubit, g.resources.depth), (3, 0, 1));
    }

    #[test]
    fn cp_rejects_same_qubit() {
        let l = build_layout(3).unwrap();
        assert!(compile_cp(&l, 1, 1, 0.2).is_err());
        let g = compile_cp(&l, 2, 0, 0.2).unwrap();
        assert_eq!(g.physical.gates[1], PhysicalGate::rz(P(0, 2), -0.1));
    }

    #[test]
    fn u_data_site_matches_rx_shape() {
        let l = build_layout(5).unwrap();
        let opts = LoweringOptions::new(RotationSite::Data, false);
        let u = compile_u(&l, 2, Euler::new(0.0, 0.4, 0.0), opts).unwrap();
        let rx = compile_rx(&l, 2, 0.4, opts).unwrap();
        let cnots = |c: &PhysicalCircuit| {
            c.gates.iter().filter(|g| matches!(g, PhysicalGate::Cnot { .. })).copied().collect::<Vec<_>>()
        };
        assert_eq!(cnots(&u.physical), cnots(&rx.physical));
    }

    #[test]
    fn cnot_rejects_equal_operands() {
        let l = build_layout(3).unwrap();
        assert!(compile_cnot(&l, 1, 1, LoweringOptions::default()).is_err());
    }

    #[test]
    fn naive_cnot_count() {
        for n in 2..8 {
            let l = build_layout(n).unwrap();
            let g = compile_cnot(&l, 0, n - 1, LoweringOptions::default()).unwrap();
            assert_eq!(g.resources.two_qubit, 4 * (n - 1));
        }
    }

    #[test]
    fn parallel_rejects_duplicates() {
        let l = build_layout(3).unwrap();
        let e = Euler::new(0.1, 0.2, 0.3);
        assert!(matches!(compile_parallel_unitaries(&l, &[(1, e), (1, e)]), Err(Error::DuplicateIndex(1))));
    }

    #[test]
    fn compiled_circuit_examples() {
        let l = build_layout(4).unwrap();
        let lc = LogicalCircuit::with_gates(
            4,
            vec![LogicalGate::Cp { a: 0, b: 1, angle: PI }, LogicalGate::Rz { q: 0, angle: 0.3 }],
        );
        let out = compile_circuit(&l, &lc, LoweringOptions::default()).unwrap();
        assert_eq!(out.physical.len(), 4);
        assert_eq!(out.physical.cnot_count(), 0);

        let empty = compile_circuit(&l, &LogicalCircuit::new(4), LoweringOptions::default()).unwrap();
        assert!(empty.physical.is_empty());

        let mut qft = LogicalCircuit::new(4);
        for a in 0..4 {
            for b in a + 1..4 {
                qft.push(LogicalGate::Cp { a, b, angle: PI / (1 << (b - a)) as f64 });
            }
        }
        let out = compile_circuit(&l, &qft, LoweringOptions::default()).unwrap();
        assert_eq!(out.physical.len(), 18);
        assert_eq!(out.physical.cnot_count(), 0);
    }

    #[test]
    fn everything_is_local() {
        for n in 2..9 {
            let l = build_layout(n).unwrap();
            for site in [RotationSite::Center, RotationSite::Data] {
                for peep in [false, true] {
                    let opts = LoweringOptions::new(site, peep);
                    for i in 0..n {
                        let gates = [
                            compile_rx(&l, i, 0.3, opts).unwrap(),
                            compile_u(&l, i, Euler::new(0.1, 0.2, 0.3), opts).unwrap(),
                            compile_h(&l, i, opts).unwrap(),
                            compile_cnot(&l, i, (i + 1) % n, opts).unwrap(),
                        ];
                        for g in gates {
                            assert!(validate_locality(&g.physical, &l).is_empty(), "{:?}", g.logical);
                        }
                    }
                }
            }
        }
    }
}
