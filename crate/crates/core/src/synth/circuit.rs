use alloc::vec::Vec;
use core::ops::Range;

use super::SynthError;

/// A primitive gate. Angles are in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H { qubit: u32 },
    Ry { qubit: u32, theta: f64 },
    Cx { control: u32, target: u32 },
    U3 { qubit: u32, theta: f64, phi: f64, lambda: f64 },
}

impl Gate {
    /// Qubits touched by the gate, as `(first, optional second)`.
    pub fn qubits(&self) -> (u32, Option<u32>) {
        match *self {
            Gate::H { qubit } | Gate::Ry { qubit, .. } | Gate::U3 { qubit, .. } => (qubit, None),
            Gate::Cx { control, target } => (control, Some(target)),
        }
    }

    pub fn touches(&self, q: u32) -> bool {
        let (a, b) = self.qubits();
        a == q || b == Some(q)
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    fn validate(&self, n_qubits: u32) -> Result<(), SynthError> {
        let (a, b) = self.qubits();
        if a >= n_qubits || b.is_some_and(|b| b >= n_qubits) {
            return Err(SynthError::QubitOutOfRange { qubit: a.max(b.unwrap_or(0)), n_qubits });
        }
        if b == Some(a) {
            return Err(SynthError::DuplicateQubit { qubit: a });
        }
        let finite = match *self {
            Gate::Ry { theta, .. } => theta.is_finite(),
            Gate::U3 { theta, phi, lambda, .. } => {
                theta.is_finite() && phi.is_finite() && lambda.is_finite()
            }
            _ => true,
        };
        if !finite {
            return Err(SynthError::NonFiniteAngle);
        }
        Ok(())
    }
}

/// Uniformly controlled `Ry`: when the controls hold basis value `i`, the
/// target is rotated by `Ry(angles[i])`.
///
/// `controls[0]` is the most significant bit of `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplexor {
    pub target: u32,
    pub controls: Vec<u32>,
    pub angles: Vec<f64>,
}

impl Multiplexor {
    pub fn new(target: u32, controls: Vec<u32>, angles: Vec<f64>) -> Result<Self, SynthError> {
        if angles.len() != 1usize << controls.len() {
            return Err(SynthError::AngleCount {
                expected: 1usize << controls.len(),
                got: angles.len(),
            });
        }
        if controls.contains(&target) {
            return Err(SynthError::DuplicateQubit { qubit: target });
        }
        for (i, c) in controls.iter().enumerate() {
            if controls[..i].contains(c) {
                return Err(SynthError::DuplicateQubit { qubit: *c });
            }
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(SynthError::NonFiniteAngle);
        }
        Ok(Self { target, controls, angles })
    }

    /// Control value selecting the angle for basis state `index`.
    pub fn select(&self, index: usize) -> usize {
        let k = self.controls.len();
        self.controls
            .iter()
            .enumerate()
            .fold(0, |acc, (pos, &c)| acc | (((index >> c) & 1) << (k - 1 - pos)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Op {
    Gate(Gate),
    Multiplexor(Multiplexor),
}

/// A contiguous run of gates produced by lowering one multiplexor.
#[derive(Debug, Clone, PartialEq)]
pub struct LoweredRegion {
    pub range: Range<usize>,
    pub target: u32,
    /// Set when every multiplexor angle was equal: the whole region is then a
    /// plain `Ry(angle)` on the target.
    pub uniform_angle: Option<f64>,
}

/// Ordered list of operations on `n_qubits`, starting from `|0…0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumCircuit {
    n_qubits: u32,
    ops: Vec<Op>,
    regions: Vec<LoweredRegion>,
    pub measured: bool,
}

impl QuantumCircuit {
    pub fn new(n_qubits: u32) -> Result<Self, SynthError> {
        if n_qubits == 0 {
            return Err(SynthError::NoQubits);
        }
        Ok(Self { n_qubits, ops: Vec::new(), regions: Vec::new(), measured: false })
    }

    pub fn from_gates(n_qubits: u32, gates: impl IntoIterator<Item = Gate>) -> Result<Self, SynthError> {
        let mut circuit = Self::new(n_qubits)?;
        for gate in gates {
            circuit.push(gate)?;
        }
        Ok(circuit)
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn regions(&self) -> &[LoweredRegion] {
        &self.regions
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), SynthError> {
        gate.validate(self.n_qubits)?;
        self.ops.push(Op::Gate(gate));
        Ok(())
    }

    pub fn push_multiplexor(&mut self, mux: Multiplexor) -> Result<(), SynthError> {
        let n = self.n_qubits;
        if let Some(&qubit) = mux.controls.iter().chain([&mux.target]).find(|q| **q >= n) {
            return Err(SynthError::QubitOutOfRange { qubit, n_qubits: n });
        }
        self.ops.push(Op::Multiplexor(mux));
        Ok(())
    }

    /// Gates in order; fails if a multiplexor has not been lowered.
    pub fn gates(&self) -> Result<Vec<Gate>, SynthError> {
        self.ops
            .iter()
            .map(|op| match op {
                Op::Gate(g) => Ok(*g),
                Op::Multiplexor(_) => Err(SynthError::LoweringRequired),
            })
            .collect()
    }

    pub fn is_lowered(&self) -> bool {
        self.ops.iter().all(|op| matches!(op, Op::Gate(_)))
    }

    pub(crate) fn from_parts(
        n_qubits: u32,
        ops: Vec<Op>,
        regions: Vec<LoweredRegion>,
        measured: bool,
    ) -> Self {
        Self { n_qubits, ops, regions, measured }
    }

    /// Number of `(Ry|U3|H, CX)` gates.
    pub fn count_by_arity(&self) -> (usize, usize) {
        self.ops.iter().fold((0, 0), |(one, two), op| match op {
            Op::Gate(g) if g.is_two_qubit() => (one, two + 1),
            Op::Gate(_) => (one + 1, two),
            Op::Multiplexor(_) => (one, two),
        })
    }
}
