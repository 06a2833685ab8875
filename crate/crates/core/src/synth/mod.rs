//! Amplitude vector → circuit.
//!
//! The pipeline is [`compute_rotation_tree`] → [`build_multiplexor_circuit`]
//! → [`lower`] → [`optimize`] → [`map_gateset`]; [`compile`] runs all of it.
//!
//! Tree level `j` splits on bin-index bit `n−1−j`, so it rotates qubit
//! `n−1−j`, controlled by the qubits above it (most significant first).

mod circuit;
mod lower;
mod optimize;
mod tree;

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

pub use circuit::{Gate, LoweredRegion, Multiplexor, Op, QuantumCircuit};
pub use lower::{gray_angles, gray_code, lower, lower_multiplexor};
pub use optimize::{optimize, OptimizeOptions};
pub use tree::{compute_rotation_tree, RotationTree};

use crate::pmf::AmplitudeVector;

/// Rotations smaller than this (radians) are treated as identity.
pub const ANGLE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    NoQubits,
    QubitOutOfRange { qubit: u32, n_qubits: u32 },
    DuplicateQubit { qubit: u32 },
    NonFiniteAngle,
    AngleCount { expected: usize, got: usize },
    /// The circuit still contains multiplexors.
    LoweringRequired,
    UnsupportedGateset,
    /// A gate has no exact equivalent in the requested gate set.
    NotRepresentable(Gate),
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::NoQubits => f.write_str("circuit needs at least one qubit"),
            SynthError::QubitOutOfRange { qubit, n_qubits } => {
                write!(f, "qubit {qubit} out of range for a {n_qubits}-qubit circuit")
            }
            SynthError::DuplicateQubit { qubit } => write!(f, "qubit {qubit} used twice in one gate"),
            SynthError::NonFiniteAngle => f.write_str("gate angle is not finite"),
            SynthError::AngleCount { expected, got } => {
                write!(f, "multiplexor needs {expected} angles, got {got}")
            }
            SynthError::LoweringRequired => f.write_str("circuit contains multiplexors; lower it first"),
            SynthError::UnsupportedGateset => f.write_str("unsupported gate set (expected h-ry-cx or u3-cx)"),
            SynthError::NotRepresentable(g) => write!(f, "{g:?} is not representable in the target gate set"),
        }
    }
}

impl core::error::Error for SynthError {}

/// Target gate vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gateset {
    #[default]
    HRyCx,
    U3Cx,
}

impl FromStr for Gateset {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "h_ry_cx" | "h-ry-cx" => Ok(Gateset::HRyCx),
            "u3_cx" | "u3-cx" => Ok(Gateset::U3Cx),
            _ => Err(SynthError::UnsupportedGateset),
        }
    }
}

/// `Ry(2θ₀)` on the top qubit, then one multiplexor per deeper tree level.
pub fn build_multiplexor_circuit(tree: &RotationTree) -> QuantumCircuit {
    let n = tree.depth() as u32;
    let mut circuit = QuantumCircuit::new(n).expect("tree has at least one level");
    for (j, level) in tree.levels().iter().enumerate() {
        let j = j as u32;
        let target = n - 1 - j;
        let angles: Vec<f64> = level.iter().map(|t| 2.0 * t).collect();
        if j == 0 {
            circuit.push(Gate::Ry { qubit: target, theta: angles[0] }).expect("valid qubit");
        } else {
            let controls = (target + 1..n).rev().collect();
            let mux = Multiplexor::new(target, controls, angles).expect("well-formed level");
            circuit.push_multiplexor(mux).expect("valid qubits");
        }
    }
    circuit
}

/// `H` on every qubit: the closed form for a uniform PMF.
pub fn uniform_circuit(n_qubits: u32) -> Result<QuantumCircuit, SynthError> {
    QuantumCircuit::from_gates(n_qubits, (0..n_qubits).map(|qubit| Gate::H { qubit }))
}

/// Rewrite into the target vocabulary. The mapping is one gate to one gate.
pub fn map_gateset(circuit: &QuantumCircuit, gateset: Gateset) -> Result<QuantumCircuit, SynthError> {
    let ops = circuit
        .gates()?
        .into_iter()
        .map(|g| map_gate(g, gateset).map(Op::Gate))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QuantumCircuit::from_parts(
        circuit.n_qubits(),
        ops,
        circuit.regions().to_vec(),
        circuit.measured,
    ))
}

fn map_gate(gate: Gate, gateset: Gateset) -> Result<Gate, SynthError> {
    Ok(match (gateset, gate) {
        (_, Gate::Cx { .. }) => gate,
        (Gateset::U3Cx, Gate::Ry { qubit, theta }) => Gate::U3 { qubit, theta, phi: 0.0, lambda: 0.0 },
        (Gateset::U3Cx, Gate::H { qubit }) => Gate::U3 { qubit, theta: PI / 2.0, phi: 0.0, lambda: PI },
        (Gateset::U3Cx, Gate::U3 { .. }) => gate,
        (Gateset::HRyCx, Gate::H { .. } | Gate::Ry { .. }) => gate,
        (Gateset::HRyCx, Gate::U3 { qubit, theta, phi, lambda }) => {
            if phi == 0.0 && lambda == 0.0 {
                Gate::Ry { qubit, theta }
            } else if theta == PI / 2.0 && phi == 0.0 && lambda == PI {
                Gate::H { qubit }
            } else {
                return Err(SynthError::NotRepresentable(gate));
            }
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CircuitMetrics {
    pub gate_count: usize,
    /// Longest chain of gates where consecutive gates share a qubit.
    pub depth: usize,
}

pub fn circuit_metrics(circuit: &QuantumCircuit) -> Result<CircuitMetrics, SynthError> {
    let gates = circuit.gates()?;
    let mut layer = alloc::vec![0usize; circuit.n_qubits() as usize];
    for g in &gates {
        let (a, b) = g.qubits();
        let next = 1 + b.map_or(layer[a as usize], |b| layer[a as usize].max(layer[b as usize]));
        layer[a as usize] = next;
        if let Some(b) = b {
            layer[b as usize] = next;
        }
    }
    Ok(CircuitMetrics { gate_count: gates.len(), depth: layer.into_iter().max().unwrap_or(0) })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CompileOptions {
    pub gateset: Gateset,
    pub optimize: OptimizeOptions,
    /// Emit the `H` bank directly for uniform amplitudes instead of going
    /// through the tree. Both routes produce the same circuit.
    pub uniform_shortcut: bool,
}

/// Full synthesis pipeline.
pub fn compile(amps: &AmplitudeVector, options: &CompileOptions) -> Result<QuantumCircuit, SynthError> {
    let optimized = if options.uniform_shortcut && amps.is_uniform() {
        uniform_circuit(amps.qubits())?
    } else {
        let tree = compute_rotation_tree(amps);
        optimize(&lower(&build_multiplexor_circuit(&tree)), &options.optimize)?
    };
    map_gateset(&optimized, options.gateset)
}
