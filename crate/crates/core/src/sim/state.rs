use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::SimError;
use crate::synth::{Gate, Multiplexor, Op, QuantumCircuit};

/// Largest register [`statevector`] accepts by default.
pub const DEFAULT_MAX_QUBITS: u32 = 20;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

type Matrix2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    n_qubits: u32,
}

/// Single-qubit Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub(crate) fn from_index(i: usize) -> Self {
        [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z][i & 3]
    }
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: u32) -> Self {
        let mut amplitudes = vec![ZERO; 1usize << n_qubits];
        amplitudes[0] = ONE;
        Self { amplitudes, n_qubits }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo { len });
        }
        Ok(Self { n_qubits: len.trailing_zeros(), amplitudes })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, op: &Op) {
        match op {
            Op::Gate(g) => self.apply_gate(g),
            Op::Multiplexor(m) => self.apply_multiplexor(m),
        }
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::H { qubit } => {
                let s = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
                self.apply_1q(qubit, &[[s, s], [s, -s]]);
            }
            Gate::Ry { qubit, theta } => self.apply_1q(qubit, &ry(theta)),
            Gate::U3 { qubit, theta, phi, lambda } => self.apply_1q(qubit, &u3(theta, phi, lambda)),
            Gate::Cx { control, target } => {
                let (cbit, tbit) = (1usize << control, 1usize << target);
                for i in 0..self.amplitudes.len() {
                    if i & cbit != 0 && i & tbit == 0 {
                        self.amplitudes.swap(i, i | tbit);
                    }
                }
            }
        }
    }

    pub fn apply_pauli(&mut self, qubit: u32, pauli: Pauli) {
        let bit = 1usize << qubit;
        let i_unit = Complex64::new(0.0, 1.0);
        for i in 0..self.amplitudes.len() {
            if i & bit != 0 {
                continue;
            }
            let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | bit]);
            let (b0, b1) = match pauli {
                Pauli::I => (a0, a1),
                Pauli::X => (a1, a0),
                Pauli::Y => (-i_unit * a1, i_unit * a0),
                Pauli::Z => (a0, -a1),
            };
            self.amplitudes[i] = b0;
            self.amplitudes[i | bit] = b1;
        }
    }

    fn apply_multiplexor(&mut self, mux: &Multiplexor) {
        let bit = 1usize << mux.target;
        let matrices: Vec<Matrix2> = mux.angles.iter().map(|t| ry(*t)).collect();
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let m = &matrices[mux.select(i)];
                self.mix(i, i | bit, m);
            }
        }
    }

    fn apply_1q(&mut self, qubit: u32, m: &Matrix2) {
        let bit = 1usize << qubit;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                self.mix(i, i | bit, m);
            }
        }
    }

    #[inline]
    fn mix(&mut self, i0: usize, i1: usize, m: &Matrix2) {
        let (a0, a1) = (self.amplitudes[i0], self.amplitudes[i1]);
        self.amplitudes[i0] = m[0][0] * a0 + m[0][1] * a1;
        self.amplitudes[i1] = m[1][0] * a0 + m[1][1] * a1;
    }

    /// `max |⟨i|self⟩ − e^{iφ}⟨i|other⟩|` minimized over the global phase `φ`.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| b.conj() * a)
            .sum();
        let phase = if overlap.norm() == 0.0 { ONE } else { overlap / overlap.norm() };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max)
    }
}

fn ry(theta: f64) -> Matrix2 {
    let (s, c) = libm::sincos(theta / 2.0);
    [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]]
}

fn u3(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, c) = libm::sincos(theta / 2.0);
    let e = |x: f64| Complex64::new(libm::cos(x), libm::sin(x));
    [[Complex64::new(c, 0.0), -e(lambda) * s], [e(phi) * s, e(phi + lambda) * c]]
}

/// Exact evolution of `|0…0⟩` through the circuit.
pub fn statevector(circuit: &QuantumCircuit) -> Result<StateVector, SimError> {
    statevector_with_limit(circuit, DEFAULT_MAX_QUBITS)
}

pub fn statevector_with_limit(circuit: &QuantumCircuit, max_qubits: u32) -> Result<StateVector, SimError> {
    let n = circuit.n_qubits();
    if n > max_qubits {
        return Err(SimError::Capacity { n_qubits: n, max: max_qubits });
    }
    let mut state = StateVector::zero(n);
    for op in circuit.ops() {
        state.apply(op);
    }
    Ok(state)
}

/// Evolve an arbitrary starting state.
pub fn evolve(mut state: StateVector, circuit: &QuantumCircuit) -> Result<StateVector, SimError> {
    if state.n_qubits() != circuit.n_qubits() {
        return Err(SimError::ShapeMismatch { expected: circuit.n_qubits() as usize, got: state.n_qubits() as usize });
    }
    for op in circuit.ops() {
        state.apply(op);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_on_zero() {
        let c = QuantumCircuit::from_gates(1, [Gate::H { qubit: 0 }]).unwrap();
        let sv = statevector(&c).unwrap();
        for a in sv.amplitudes() {
            assert!((a.re - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15 && a.im == 0.0);
        }
    }

    #[test]
    fn five_hadamards_are_uniform() {
        let c = crate::synth::uniform_circuit(5).unwrap();
        let sv = statevector(&c).unwrap();
        let expected = 1.0 / libm::sqrt(32.0);
        assert!(sv.amplitudes().iter().all(|a| (a.re - expected).abs() < 1e-15));
    }

    #[test]
    fn qubit_zero_is_least_significant() {
        let c = QuantumCircuit::from_gates(3, [Gate::U3 { qubit: 0, theta: core::f64::consts::PI, phi: 0.0, lambda: 0.0 }]).unwrap();
        let probs = statevector(&c).unwrap().probabilities();
        assert!((probs[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cx_flips_target_when_control_set() {
        let c = QuantumCircuit::from_gates(
            2,
            [Gate::Ry { qubit: 1, theta: core::f64::consts::PI }, Gate::Cx { control: 1, target: 0 }],
        )
        .unwrap();
        let probs = statevector(&c).unwrap().probabilities();
        assert!((probs[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn h_equals_its_u3_form() {
        let mut a = StateVector::zero(1);
        a.apply_gate(&Gate::Ry { qubit: 0, theta: 0.3 });
        let mut b = a.clone();
        a.apply_gate(&Gate::H { qubit: 0 });
        b.apply_gate(&Gate::U3 { qubit: 0, theta: core::f64::consts::FRAC_PI_2, phi: 0.0, lambda: core::f64::consts::PI });
        assert!(a.distance_up_to_phase(&b) < 1e-15);
    }

    #[test]
    fn capacity_limit() {
        let c = QuantumCircuit::new(21).unwrap();
        assert_eq!(statevector(&c), Err(SimError::Capacity { n_qubits: 21, max: 20 }));
    }

    #[test]
    fn paulis_square_to_identity() {
        let c = QuantumCircuit::from_gates(2, [Gate::H { qubit: 0 }, Gate::Ry { qubit: 1, theta: 0.4 }]).unwrap();
        let start = statevector(&c).unwrap();
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let mut s = start.clone();
            s.apply_pauli(1, p);
            s.apply_pauli(1, p);
            assert!(s.distance_up_to_phase(&start) < 1e-15);
        }
    }
}
