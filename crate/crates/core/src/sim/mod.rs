//! Statevector simulation, seeded sampling and noisy trajectories.

mod noise;
mod sampling;
mod state;

use core::fmt;

pub use noise::{noisy_sample, NoiseModel};
pub use sampling::{sample, Histogram};
pub use state::{evolve, statevector, statevector_with_limit, Pauli, StateVector, DEFAULT_MAX_QUBITS};

use crate::synth::SynthError;

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    Capacity { n_qubits: u32, max: u32 },
    EmptySample,
    NotPowerOfTwo { len: usize },
    ShapeMismatch { expected: usize, got: usize },
    InvalidNoise { name: &'static str, value: f64 },
    Circuit(SynthError),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Capacity { n_qubits, max } => {
                write!(f, "{n_qubits} qubits exceeds the simulator limit of {max}")
            }
            SimError::EmptySample => f.write_str("at least one shot is required"),
            SimError::NotPowerOfTwo { len } => write!(f, "state length {len} is not a power of two"),
            SimError::ShapeMismatch { expected, got } => write!(f, "expected {expected} qubits, got {got}"),
            SimError::InvalidNoise { name, value } => write!(f, "noise parameter {name}={value} is outside [0, 1]"),
            SimError::Circuit(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for SimError {}

impl From<SynthError> for SimError {
    fn from(e: SynthError) -> Self {
        SimError::Circuit(e)
    }
}
