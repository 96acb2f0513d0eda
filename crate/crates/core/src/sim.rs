//! Dense statevector simulation over physical qubits.
//!
//! Qubit `k` of a [`Register`] is bit `k` of the basis index (little endian).
//! Registers list data qubits first, then parity qubits, then ancillas, so
//! the data-qubit amplitudes of a decoded chip are the first `2^n` entries.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{PhysicalCircuit, PhysicalGate};
use crate::error::{Error, Result};
use crate::layout::Layout;
use crate::pauli::{Pauli, PauliString};
use crate::qubit::QubitId;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;

const C0: Complex64 = Complex64::new(0.0, 0.0);
const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Ordered set of physical qubits backing a statevector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    ids: Vec<QubitId>,
    index: HashMap<QubitId, usize>,
}

impl Register {
    pub fn new(mut ids: Vec<QubitId>) -> Self {
        ids.sort();
        ids.dedup();
        let index = ids.iter().enumerate().map(|(k, q)| (*q, k)).collect();
        Self { ids, index }
    }

    pub fn for_layout(layout: &Layout) -> Self {
        Self::new(layout.qubits().to_vec())
    }

    /// Layout qubits plus every ancilla the circuit touches.
    pub fn for_circuit(layout: &Layout, c: &PhysicalCircuit) -> Self {
        let mut ids = layout.qubits().to_vec();
        ids.extend(c.ancillas());
        Self::new(ids)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[QubitId] {
        &self.ids
    }

    pub fn index_of(&self, q: &QubitId) -> Result<usize> {
        self.index.get(q).copied().ok_or(Error::UnknownQubit(*q))
    }
}

/// Pure state of `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_size(q: usize) -> Result<()> {
    if q > MAX_QUBITS {
        Err(Error::TooManyQubits {
            needed: q,
            limit: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

impl Statevector {
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        check_size(num_qubits)?;
        let mut amps = vec![C0; 1 << num_qubits];
        amps[index] = C1;
        Ok(Self { num_qubits, amps })
    }

    /// Wraps raw amplitudes; the length must be a power of two. Not normalized.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::BadGate(format!("amplitude count {len} is not a power of two")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_size(num_qubits)?;
        Ok(Self { num_qubits, amps })
    }

    /// Haar-ish random state from i.i.d. complex Gaussians.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        check_size(num_qubits)?;
        use rand_distr::{Distribution, StandardNormal};
        let mut amps: Vec<Complex64> = (0..1usize << num_qubits)
            .map(|_| {
                Complex64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { num_qubits, amps })
    }

    /// Places a small state on the low qubits of a larger all-zero register.
    pub fn embed(&self, num_qubits: usize) -> Result<Self> {
        check_size(num_qubits)?;
        if num_qubits < self.num_qubits {
            return Err(Error::SizeMismatch(self.num_qubits, num_qubits));
        }
        let mut amps = vec![C0; 1 << num_qubits];
        amps[..self.amps.len()].copy_from_slice(&self.amps);
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q < self.num_qubits {
            Ok(())
        } else {
            Err(Error::UnknownQubit(QubitId::Data(q)))
        }
    }

    /// Applies the 2x2 matrix `[[m00, m01], [m10, m11]]` to qubit `q`.
    pub fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a0 = self.amps[i];
                let a1 = self.amps[i | bit];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_qubit(control)?;
        self.check_qubit(target)?;
        if control == target {
            return Err(Error::BadGate("CNOT control equals target".into()));
        }
        let (cb, tb) = (1usize << control, 1usize << target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
        Ok(())
    }

    pub fn apply_x(&mut self, q: usize) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
        Ok(())
    }

    /// Probability that qubit `q` reads 1.
    pub fn prob_one(&self, q: usize) -> Result<f64> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Samples a Z measurement of qubit `q` and collapses.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<u8> {
        let p1 = self.prob_one(q)?;
        let outcome = u8::from(rng.random::<f64>() < p1);
        self.project(q, outcome)?;
        Ok(outcome)
    }

    /// Projects qubit `q` onto `outcome` and renormalizes.
    pub fn project(&mut self, q: usize, outcome: u8) -> Result<()> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let keep = if outcome == 1 { bit } else { 0 };
        let mut mass = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != keep {
                *a = C0;
            } else {
                mass += a.norm_sqr();
            }
        }
        if mass <= 0.0 {
            return Err(Error::BadGate(format!("projection of qubit {q} onto {outcome} has zero probability")));
        }
        let s = mass.sqrt();
        self.amps.iter_mut().for_each(|a| *a /= s);
        Ok(())
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::SizeMismatch(self.num_qubits, other.num_qubits));
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// Multiplies by a Pauli given as `(qubit index, op)` pairs.
    fn apply_pauli_indices(&mut self, ops: &[(usize, Pauli)]) -> Result<()> {
        let i_unit = Complex64::new(0.0, 1.0);
        for &(q, p) in ops {
            match p {
                Pauli::X => self.apply_x(q)?,
                Pauli::Z => self.apply_1q(q, [[C1, C0], [C0, -C1]])?,
                Pauli::Y => self.apply_1q(q, [[C0, -i_unit], [i_unit, C0]])?,
            }
        }
        Ok(())
    }
}

pub fn rz_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), C0],
        [C0, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn rx_matrix(theta: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new((theta / 2.0).cos(), 0.0);
    let s = Complex64::new(0.0, -(theta / 2.0).sin());
    [[c, s], [s, c]]
}

pub fn h_matrix() -> [[Complex64; 2]; 2] {
    let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[r, r], [r, -r]]
}

/// Statevector bound to a register, with a seeded RNG for measurements.
#[derive(Clone, Debug)]
pub struct ChipState {
    pub register: Register,
    pub state: Statevector,
    /// Measurement record in application order.
    pub outcomes: Vec<(QubitId, u8)>,
}

impl ChipState {
    pub fn new(register: Register) -> Result<Self> {
        let state = Statevector::zero(register.len())?;
        Ok(Self {
            register,
            state,
            outcomes: Vec::new(),
        })
    }

    pub fn with_state(register: Register, state: Statevector) -> Result<Self> {
        if register.len() != state.num_qubits() {
            return Err(Error::SizeMismatch(register.len(), state.num_qubits()));
        }
        Ok(Self {
            register,
            state,
            outcomes: Vec::new(),
        })
    }

    /// Chip in `|psi> (x) |0...0>` with `psi` on the data qubits.
    pub fn with_data_state(register: Register, psi: &Statevector) -> Result<Self> {
        let state = psi.embed(register.len())?;
        Self::with_state(register, state)
    }

    pub fn apply<R: Rng + ?Sized>(&mut self, gate: &PhysicalGate, rng: &mut R) -> Result<()> {
        apply(&mut self.state, &self.register, gate, rng).map(|out| {
            if let Some(o) = out {
                self.outcomes.push((gate.qubits()[0], o));
            }
        })
    }

    pub fn run<R: Rng + ?Sized>(&mut self, c: &PhysicalCircuit, rng: &mut R) -> Result<()> {
        c.gates.iter().try_for_each(|g| self.apply(g, rng))
    }

    /// Runs a unitary-only circuit; no RNG needed.
    pub fn run_unitary(&mut self, c: &PhysicalCircuit) -> Result<()> {
        for g in &c.gates {
            if !g.is_unitary() {
                return Err(Error::NonUnitary(g.to_string()));
            }
            apply(&mut self.state, &self.register, g, &mut NoRng)?;
        }
        Ok(())
    }

    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        expectation(&self.state, &self.register, p)
    }
}

/// RNG stand-in for unitary-only runs; never consulted.
struct NoRng;

impl rand::RngCore for NoRng {
    fn next_u32(&mut self) -> u32 {
        unreachable!("unitary simulation drew a random number")
    }
    fn next_u64(&mut self) -> u64 {
        unreachable!("unitary simulation drew a random number")
    }
    fn fill_bytes(&mut self, _: &mut [u8]) {
        unreachable!("unitary simulation drew a random number")
    }
}

/// Applies one physical gate. Returns the outcome for `MeasureZ`.
///
/// `Init0` resets a qubit that is in a definite Z state (it is a no-op on
/// `|0>` and flips `|1>`); on a superposed or entangled qubit it errors
/// rather than silently projecting.
pub fn apply<R: Rng + ?Sized>(
    sv: &mut Statevector,
    reg: &Register,
    gate: &PhysicalGate,
    rng: &mut R,
) -> Result<Option<u8>> {
    match *gate {
        PhysicalGate::Cnot { control, target } => {
            sv.apply_cnot(reg.index_of(&control)?, reg.index_of(&target)?)?
        }
        PhysicalGate::Rx { q, angle } => sv.apply_1q(reg.index_of(&q)?, rx_matrix(angle))?,
        PhysicalGate::Rz { q, angle } => sv.apply_1q(reg.index_of(&q)?, rz_matrix(angle))?,
        PhysicalGate::X(q) => sv.apply_x(reg.index_of(&q)?)?,
        PhysicalGate::H(q) => sv.apply_1q(reg.index_of(&q)?, h_matrix())?,
        PhysicalGate::Init0(q) => {
            let k = reg.index_of(&q)?;
            let p1 = sv.prob_one(k)?;
            const EPS: f64 = 1e-12;
            if p1 > 1.0 - EPS {
                sv.apply_x(k)?;
            } else if p1 > EPS {
                return Err(Error::InitOnSuperposed(q, p1));
            }
        }
        PhysicalGate::MeasureZ(q) => return Ok(Some(sv.measure_z(reg.index_of(&q)?, rng)?)),
    }
    Ok(None)
}

/// `<psi|P|psi>`, real for Hermitian `P`.
pub fn expectation(sv: &Statevector, reg: &Register, p: &PauliString) -> Result<f64> {
    let ops = p
        .iter()
        .map(|(q, op)| Ok((reg.index_of(&q)?, op)))
        .collect::<Result<Vec<_>>>()?;
    let mut image = sv.clone();
    image.apply_pauli_indices(&ops)?;
    Ok(sv.inner(&image)?.re)
}

/// `|<a|b>|^2`; insensitive to global phase.
pub fn fidelity_up_to_phase(a: &Statevector, b: &Statevector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Total probability outside the data-qubit subspace (any non-data qubit in |1>).
pub fn non_data_population(sv: &Statevector, n: usize) -> f64 {
    let low = 1usize << n;
    sv.amps[low.min(sv.amps.len())..].iter().map(|a| a.norm_sqr()).sum()
}

/// Data-qubit state of a chip whose parity qubits (and ancillas) are all in
/// `|0>`. Refuses states that still carry parity information, since tracing
/// those qubits out would destroy coherence.
pub fn reduced_data_state(sv: &Statevector, layout: &Layout) -> Result<Statevector> {
    let n = layout.n();
    if sv.num_qubits() < layout.num_qubits() {
        return Err(Error::SizeMismatch(sv.num_qubits(), layout.num_qubits()));
    }
    let residual = non_data_population(sv, n);
    if residual > 1e-10 {
        return Err(Error::ResidualParity(residual));
    }
    Statevector::from_amplitudes(sv.amps[..1 << n].to_vec())
}

/// Dense unitary of a circuit, row-major, `dim x dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![C0; dim * dim];
        for k in 0..dim {
            data[k * dim + k] = C1;
        }
        Self { dim, data }
    }

    /// Max elementwise deviation after aligning global phase on the largest
    /// entry of `self`.
    pub fn distance_up_to_phase(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        let (k, _) = self
            .data
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .expect("non-empty");
        let phase = if other.data[k].norm() > 1e-12 {
            let r = self.data[k] / other.data[k];
            r / r.norm()
        } else {
            return f64::INFINITY;
        };
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }
}

/// Largest register for dense unitary extraction.
pub const MAX_UNITARY_QUBITS: usize = 10;

/// Builds the unitary column by column by simulating each basis state.
pub fn unitary_of(c: &PhysicalCircuit, reg: &Register) -> Result<DenseMatrix> {
    let q = reg.len();
    if q > MAX_UNITARY_QUBITS {
        return Err(Error::TooManyQubits {
            needed: q,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    if let Some(g) = c.gates.iter().find(|g| !g.is_unitary()) {
        return Err(Error::NonUnitary(g.to_string()));
    }
    let dim = 1usize << q;
    let mut data = vec![C0; dim * dim];
    for col in 0..dim {
        let mut chip = ChipState::with_state(reg.clone(), Statevector::basis(q, col)?)?;
        chip.run_unitary(c)?;
        for (row, a) in chip.state.amplitudes().iter().enumerate() {
            data[row * dim + col] = *a;
        }
    }
    Ok(DenseMatrix { dim, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::build_layout;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use QubitId::{Data as D, Parity as P};

    fn reg2() -> Register {
        Register::new(vec![D(0), D(1)])
    }

    #[test]
    fn cnot_on_basis_states() {
        let r = reg2();
        let g = PhysicalGate::cnot(D(0), D(1));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = Statevector::zero(2).unwrap();
        apply(&mut s, &r, &g, &mut rng).unwrap();
        assert_eq!(s, Statevector::zero(2).unwrap());
        // qubit 0 (d0) set: index 0b01 -> 0b11
        let mut s = Statevector::basis(2, 0b01).unwrap();
        apply(&mut s, &r, &g, &mut rng).unwrap();
        assert_eq!(s, Statevector::basis(2, 0b11).unwrap());
    }

    #[test]
    fn rz_phase_on_zero() {
        let theta = 0.7;
        let mut s = Statevector::zero(1).unwrap();
        s.apply_1q(0, rz_matrix(theta)).unwrap();
        let expect = Complex64::from_polar(1.0, -theta / 2.0);
        assert!((s.amplitudes()[0] - expect).norm() < 1e-15);
    }

    #[test]
    fn expectations() {
        let r = Register::new(vec![D(0)]);
        let z = PauliString::z_on([D(0)]);
        let s = Statevector::zero(1).unwrap();
        assert!((expectation(&s, &r, &z).unwrap() - 1.0).abs() < 1e-15);
        let mut plus = s.clone();
        plus.apply_1q(0, h_matrix()).unwrap();
        assert!(expectation(&plus, &r, &z).unwrap().abs() < 1e-15);
        let y = PauliString::new().with(D(0), Pauli::Y);
        assert!(expectation(&plus, &r, &y).unwrap().abs() < 1e-15);
    }

    #[test]
    fn fidelity_ignores_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = Statevector::random(3, &mut rng).unwrap();
        let rotated = Statevector::from_amplitudes(
            a.amplitudes().iter().map(|x| x * Complex64::from_polar(1.0, 1.3)).collect(),
        )
        .unwrap();
        assert!((fidelity_up_to_phase(&a, &rotated).unwrap() - 1.0).abs() < 1e-12);
        let b0 = Statevector::basis(2, 0).unwrap();
        let b1 = Statevector::basis(2, 1).unwrap();
        assert_eq!(fidelity_up_to_phase(&b0, &b1).unwrap(), 0.0);
        assert!(fidelity_up_to_phase(&b0, &a).is_err());
    }

    #[test]
    fn init_refuses_superposition() {
        let r = Register::new(vec![D(0)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = Statevector::zero(1).unwrap();
        s.apply_1q(0, h_matrix()).unwrap();
        let err = apply(&mut s, &r, &PhysicalGate::Init0(D(0)), &mut rng);
        assert!(matches!(err, Err(Error::InitOnSuperposed(..))));
        // after a measurement the reset is legal and lands in |0>
        apply(&mut s, &r, &PhysicalGate::MeasureZ(D(0)), &mut rng).unwrap();
        apply(&mut s, &r, &PhysicalGate::Init0(D(0)), &mut rng).unwrap();
        assert_eq!(s, Statevector::zero(1).unwrap());
    }

    #[test]
    fn measurement_is_seeded() {
        let r = Register::new(vec![D(0)]);
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..32)
                .map(|_| {
                    let mut s = Statevector::zero(1).unwrap();
                    s.apply_1q(0, h_matrix()).unwrap();
                    apply(&mut s, &r, &PhysicalGate::MeasureZ(D(0)), &mut rng).unwrap().unwrap()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(11), run(11));
        assert!(run(11).contains(&0) && run(11).contains(&1));
    }

    #[test]
    fn out_of_range_operand() {
        let r = reg2();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut s = Statevector::zero(2).unwrap();
        assert!(apply(&mut s, &r, &PhysicalGate::X(P(0, 1)), &mut rng).is_err());
        assert!(s.apply_x(5).is_err());
    }

    #[test]
    fn reduced_state_of_blank_chip() {
        let l = build_layout(3).unwrap();
        let s = Statevector::zero(l.num_qubits()).unwrap();
        assert_eq!(reduced_data_state(&s, &l).unwrap(), Statevector::zero(3).unwrap());
        let mut entangled = s.clone();
        entangled.apply_1q(0, h_matrix()).unwrap();
        entangled.apply_cnot(0, 3).unwrap();
        assert!(matches!(reduced_data_state(&entangled, &l), Err(Error::ResidualParity(_))));
    }

    #[test]
    fn cnot_unitary_is_permutation() {
        let r = reg2();
        let c = PhysicalCircuit::with_gates(2, vec![PhysicalGate::cnot(D(0), D(1))]);
        let u = unitary_of(&c, &r).unwrap();
        // columns: 00->00, 01->11, 10->10, 11->01
        let perm = [0usize, 3, 2, 1];
        for (col, &row) in perm.iter().enumerate() {
            assert_eq!(u.get(row, col), C1);
        }
        assert!(unitary_of(&PhysicalCircuit::with_gates(2, vec![PhysicalGate::MeasureZ(D(0))]), &r).is_err());
        let big = Register::new((0..11).map(D).collect());
        assert!(unitary_of(&PhysicalCircuit::new(11), &big).is_err());
    }

    #[test]
    fn simulator_cap() {
        assert!(Statevector::zero(MAX_QUBITS + 1).is_err());
    }
}
