#![no_std]
//! State-preparation compiler for discrete probability mass functions.
//!
//! A PMF over `2^n` bins is turned into an `n`-qubit circuit whose measurement
//! statistics reproduce the PMF:
//!
//! - [pmf] builds [`PmfTable`](pmf::PmfTable)s and normalizes them into
//!   [`AmplitudeVector`](pmf::AmplitudeVector)s.
//! - [synth] computes the binary rotation tree, emits multiplexed `Ry`
//!   rotations, lowers them with the gray-code decomposition and optimizes the
//!   result.
//! - [sim] runs circuits: exact statevector evolution, seeded sampling and
//!   Pauli-trajectory noise.
//! - [stats] compares histograms against PMFs (KL, JS, G-test, chi-square) and
//!   picks shot counts.
//!
//! Basis-state indices are little-endian in qubits: qubit 0 is the least
//! significant bit of the index, so bin `i` of a PMF is the basis state `|i⟩`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, OpenQASM text
//! and the CLI live in the `qsynth` crate.

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod pmf;
pub mod sim;
pub mod stats;
pub mod synth;

pub use pmf::{AmplitudeVector, DistributionKind, NormalizationMode, PmfError, PmfTable};
pub use sim::{Histogram, NoiseModel, SimError, StateVector};
pub use stats::{DivergenceReport, StatsError};
pub use synth::{Gate, Gateset, Multiplexor, Op, QuantumCircuit, RotationTree, SynthError};
