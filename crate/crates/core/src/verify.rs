//! Equivalence checks of compiled circuits against logical reference unitaries.
//!
//! The reference matrices are built here from explicit 2x2 and diagonal
//! blocks, independently of the simulator's gate kernels.

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{LogicalCircuit, LogicalGate, PhysicalCircuit};
use crate::codec::{decode_full, encode_full};
use crate::compiler::{compile_circuit, LoweringOptions};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::pauli::PauliString;
use crate::qubit::QubitId;
use crate::sim::{non_data_population, ChipState, DenseMatrix, Register, Statevector};

/// Minimum accepted fidelity between compiled and reference output.
pub const FIDELITY_TOL: f64 = 1e-9;
/// Maximum accepted population left on parity qubits after decoding.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Largest logical register the end-to-end check accepts (21 physical qubits).
pub const MAX_VERIFY_N: usize = 6;

type M2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for r in 0..2 {
        for k in 0..2 {
            out[r][k] = a[r][0] * b[0][k] + a[r][1] * b[1][k];
        }
    }
    out
}

fn ref_rz(t: f64) -> M2 {
    [[Complex64::from_polar(1.0, -t / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, t / 2.0)]]
}

fn ref_rx(t: f64) -> M2 {
    let (s, co) = (t / 2.0).sin_cos();
    [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
}

fn ref_u(alpha: f64, beta: f64, gamma: f64) -> M2 {
    mul2(&ref_rz(alpha), &mul2(&ref_rx(beta), &ref_rz(gamma)))
}

fn bit(x: usize, i: usize) -> usize {
    (x >> i) & 1
}

fn on_qubit(m: &M2, q: usize, n: usize) -> DenseMatrix {
    let dim = 1usize << n;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for col in 0..dim {
            if (r ^ col) & !(1 << q) == 0 {
                data[r * dim + col] = m[bit(r, q)][bit(col, q)];
            }
        }
    }
    DenseMatrix { dim, data }
}

fn diagonal(n: usize, f: impl Fn(usize) -> Complex64) -> DenseMatrix {
    let dim = 1usize << n;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for k in 0..dim {
        data[k * dim + k] = f(k);
    }
    DenseMatrix { dim, data }
}

/// Product `a * b` (apply `b` first).
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    assert_eq!(a.dim, b.dim);
    let dim = a.dim;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for k in 0..dim {
            let x = a.data[r * dim + k];
            if x == c(0.0, 0.0) {
                continue;
            }
            for col in 0..dim {
                data[r * dim + col] += x * b.data[k * dim + col];
            }
        }
    }
    DenseMatrix { dim, data }
}

/// Ideal action of a logical gate on `n` logical qubits (qubit `i` is bit `i`).
pub fn reference_unitary(g: &LogicalGate, n: usize) -> Result<DenseMatrix> {
    g.validate(n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match *g {
        LogicalGate::Rx { q, angle } => on_qubit(&ref_rx(angle), q, n),
        LogicalGate::Rz { q, angle } => on_qubit(&ref_rz(angle), q, n),
        LogicalGate::X { q } => on_qubit(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]], q, n),
        LogicalGate::H { q } => on_qubit(&[[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]], q, n),
        LogicalGate::U { q, alpha, beta, gamma } => on_qubit(&ref_u(alpha, beta, gamma), q, n),
        LogicalGate::Cp { a, b, angle } => diagonal(n, |k| {
            if bit(k, a) & bit(k, b) == 1 {
                Complex64::from_polar(1.0, angle)
            } else {
                c(1.0, 0.0)
            }
        }),
        LogicalGate::Cz { a, b } => diagonal(n, |k| c(1.0 - 2.0 * (bit(k, a) & bit(k, b)) as f64, 0.0)),
        LogicalGate::Cnot { control, target } => {
            let dim = 1usize << n;
            let mut data = vec![c(0.0, 0.0); dim * dim];
            for col in 0..dim {
                let row = col ^ (bit(col, control) << target);
                data[row * dim + col] = c(1.0, 0.0);
            }
            DenseMatrix { dim, data }
        }
    })
}

/// Reference unitary of a whole logical circuit.
pub fn reference_circuit(lc: &LogicalCircuit) -> Result<DenseMatrix> {
    let mut u = DenseMatrix::identity(1 << lc.n);
    for g in &lc.gates {
        u = matmul(&reference_unitary(g, lc.n)?, &u);
    }
    Ok(u)
}

pub fn apply_dense(m: &DenseMatrix, psi: &Statevector) -> Result<Statevector> {
    let amps = psi.amplitudes();
    if amps.len() != m.dim {
        return Err(Error::SizeMismatch(m.dim, amps.len()));
    }
    let out = (0..m.dim)
        .map(|r| (0..m.dim).map(|k| m.data[r * m.dim + k] * amps[k]).sum())
        .collect();
    Statevector::from_amplitudes(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub trials: usize,
    pub min_fidelity: f64,
    pub max_residual: f64,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.min_fidelity >= 1.0 - FIDELITY_TOL && self.max_residual <= RESIDUAL_TOL
    }
}

/// Encodes random logical states, runs `physical`, decodes, and compares the
/// data-qubit amplitudes against `reference` applied to the input.
pub fn check_equivalence<R: Rng + ?Sized>(
    layout: &Layout,
    physical: &PhysicalCircuit,
    reference: &DenseMatrix,
    trials: usize,
    rng: &mut R,
) -> Result<EquivalenceReport> {
    let n = layout.n();
    if n > MAX_VERIFY_N {
        return Err(Error::TooManyQubits {
            needed: layout.num_qubits(),
            limit: crate::sim::MAX_QUBITS,
        });
    }
    let reg = Register::for_layout(layout);
    let enc = encode_full(layout).circuit;
    let dec = decode_full(layout).circuit;
    let mut report = EquivalenceReport {
        trials,
        min_fidelity: 1.0,
        max_residual: 0.0,
    };
    for _ in 0..trials {
        let psi = Statevector::random(n, rng)?;
        let mut chip = ChipState::with_data_state(reg.clone(), &psi)?;
        chip.run_unitary(&enc)?;
        chip.run_unitary(physical)?;
        chip.run_unitary(&dec)?;
        let residual = non_data_population(&chip.state, n);
        let data = Statevector::from_amplitudes(chip.state.amplitudes()[..1 << n].to_vec())?;
        let want = apply_dense(reference, &psi)?;
        let fid = want.inner(&data)?.norm_sqr();
        report.min_fidelity = report.min_fidelity.min(fid);
        report.max_residual = report.max_residual.max(residual);
    }
    Ok(report)
}

/// Compiles `lc` and checks it end to end.
pub fn verify_logical_circuit<R: Rng + ?Sized>(
    layout: &Layout,
    lc: &LogicalCircuit,
    opts: LoweringOptions,
    trials: usize,
    rng: &mut R,
) -> Result<EquivalenceReport> {
    let compiled = compile_circuit(layout, lc, opts)?;
    check_equivalence(layout, &compiled.physical, &reference_circuit(lc)?, trials, rng)
}

/// Largest deviation from +1 of any constraint expectation, measured on
/// random code states before and after running `physical`.
pub fn constraint_deviation<R: Rng + ?Sized>(
    layout: &Layout,
    physical: &PhysicalCircuit,
    trials: usize,
    rng: &mut R,
) -> Result<f64> {
    let reg = Register::for_layout(layout);
    let enc = encode_full(layout).circuit;
    let ops: Vec<PauliString> = layout.constraints().iter().map(|c| c.parity_operator()).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let psi = Statevector::random(layout.n(), rng)?;
        let mut chip = ChipState::with_data_state(reg.clone(), &psi)?;
        chip.run_unitary(&enc)?;
        for stage in 0..2 {
            if stage == 1 {
                chip.run_unitary(physical)?;
            }
            for p in &ops {
                worst = worst.max((chip.expectation(p)? - 1.0).abs());
            }
        }
    }
    Ok(worst)
}

/// Symbolic commutation facts of the code: every line X string and every
/// data Z commutes with every constraint, and line X(i) anticommutes with
/// Z on data `j` exactly when `i == j`. Returns the first violation found.
pub fn symbolic_stabilizer_check(layout: &Layout) -> std::result::Result<(), String> {
    let n = layout.n();
    let xs: Vec<PauliString> = layout.lines().iter().map(|l| l.x_operator()).collect();
    let zs: Vec<PauliString> = (0..n).map(|i| PauliString::z_on([QubitId::Data(i)])).collect();
    for c in layout.constraints() {
        let op = c.parity_operator();
        for (i, (x, z)) in xs.iter().zip(&zs).enumerate() {
            if !op.commutes_with(x) {
                return Err(format!("X line {i} anticommutes with constraint {}", c.id));
            }
            if !op.commutes_with(z) {
                return Err(format!("Z on d{i} anticommutes with constraint {}", c.id));
            }
        }
    }
    for (i, x) in xs.iter().enumerate() {
        for (j, z) in zs.iter().enumerate() {
            if x.commutes_with(z) != (i != j) {
                return Err(format!("X line {i} vs Z on d{j} has wrong commutation"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::build_layout;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn reference_cnot_is_permutation() {
        let m = reference_unitary(&LogicalGate::Cnot { control: 0, target: 1 }, 2).unwrap();
        // |01> (bit0 = 1) -> |11>
        assert_eq!(m.get(3, 1), c(1.0, 0.0));
        assert_eq!(m.get(0, 0), c(1.0, 0.0));
        assert_eq!(m.get(2, 2), c(1.0, 0.0));
    }

    #[test]
    fn h_equals_euler_up_to_phase() {
        let h = reference_unitary(&LogicalGate::H { q: 0 }, 1).unwrap();
        let u = reference_unitary(&LogicalGate::U { q: 0, alpha: PI / 2.0, beta: PI / 2.0, gamma: PI / 2.0 }, 1).unwrap();
        assert!(h.distance_up_to_phase(&u) < 1e-12);
    }

    #[test]
    fn cp_n2_passes() {
        let l = build_layout(2).unwrap();
        let lc = LogicalCircuit::with_gates(2, vec![LogicalGate::Cp { a: 0, b: 1, angle: 0.7 }]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = verify_logical_circuit(&l, &lc, LoweringOptions::default(), 10, &mut rng).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn wrong_reference_fails() {
        let l = build_layout(3).unwrap();
        let lc = LogicalCircuit::with_gates(3, vec![LogicalGate::Rx { q: 1, angle: 0.9 }]);
        let phys = compile_circuit(&l, &lc, LoweringOptions::default()).unwrap().physical;
        let wrong = reference_unitary(&LogicalGate::Rx { q: 0, angle: 0.9 }, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(!check_equivalence(&l, &phys, &wrong, 5, &mut rng).unwrap().passed());
    }

    #[test]
    fn symbolic_check_small() {
        for n in 2..8 {
            symbolic_stabilizer_check(&build_layout(n).unwrap()).unwrap();
        }
    }
}
