use alloc::vec::Vec;

use rand_core::RngCore;

use super::sampling::{stream, unit, Cdf, StreamRole, CHUNK_SHOTS};
use super::state::{statevector, Pauli};
use super::{Histogram, SimError, StateVector};
use crate::synth::{Gate, QuantumCircuit};

/// Prefix states are cached when `gates × 2^n` stays under this many amplitudes.
const PREFIX_CACHE_LIMIT: usize = 1 << 22;

/// Depolarizing gate errors plus symmetric readout flips.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseModel {
    /// Error probability after each single-qubit gate.
    pub p1: f64,
    /// Error probability after each two-qubit gate.
    pub p2: f64,
    /// Probability that each measured bit is flipped.
    pub readout_flip: f64,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout_flip: f64) -> Result<Self, SimError> {
        for (name, value) in [("p1", p1), ("p2", p2), ("readout_flip", readout_flip)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::InvalidNoise { name, value });
            }
        }
        Ok(Self { p1, p2, readout_flip })
    }

    pub fn ideal() -> Self {
        Self::default()
    }
}

/// Monte Carlo trajectories under `noise`.
///
/// After every gate a uniformly random non-identity Pauli on the gate's
/// qubits is inserted with probability `p1` or `p2`; each measured bit is then
/// flipped with probability `readout_flip`. Measurement draws use the same
/// stream as [`sample`](super::sample), so a zero noise model returns exactly
/// the ideal histogram for the same seed.
pub fn noisy_sample(
    circuit: &QuantumCircuit,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<Histogram, SimError> {
    if shots == 0 {
        return Err(SimError::EmptySample);
    }
    let gates = circuit.gates()?;
    let n = circuit.n_qubits();
    let ideal = statevector(circuit)?;
    let ideal_cdf = Cdf::new(&ideal.probabilities());

    let prefixes = (gates.len().saturating_add(1).saturating_mul(1usize << n) <= PREFIX_CACHE_LIMIT)
        .then(|| prefix_states(n, &gates));

    let mut counts = alloc::vec![0u64; 1usize << n];
    for chunk in 0..shots.div_ceil(CHUNK_SHOTS) {
        let mut measure = stream(seed, chunk, StreamRole::Measure);
        let mut gate_noise = stream(seed, chunk, StreamRole::GateNoise);
        let mut readout = stream(seed, chunk, StreamRole::Readout);
        let in_chunk = CHUNK_SHOTS.min(shots - chunk * CHUNK_SHOTS);
        for _ in 0..in_chunk {
            let trajectory = run_trajectory(n, &gates, noise, prefixes.as_deref(), &mut gate_noise);
            let mut outcome = match trajectory {
                None => ideal_cdf.draw(unit(&mut measure)),
                Some(state) => Cdf::new(&state.probabilities()).draw(unit(&mut measure)),
            };
            if noise.readout_flip > 0.0 {
                for q in 0..n {
                    if unit(&mut readout) < noise.readout_flip {
                        outcome ^= 1 << q;
                    }
                }
            }
            counts[outcome] += 1;
        }
    }
    Histogram::from_counts(counts)
}

fn prefix_states(n: u32, gates: &[Gate]) -> Vec<StateVector> {
    let mut states = Vec::with_capacity(gates.len() + 1);
    let mut state = StateVector::zero(n);
    states.push(state.clone());
    for g in gates {
        state.apply_gate(g);
        states.push(state.clone());
    }
    states
}

/// Returns `None` when no error fired, i.e. the ideal final state applies.
fn run_trajectory(
    n: u32,
    gates: &[Gate],
    noise: &NoiseModel,
    prefixes: Option<&[StateVector]>,
    rng: &mut impl RngCore,
) -> Option<StateVector> {
    let mut state: Option<StateVector> = None;
    for (i, gate) in gates.iter().enumerate() {
        if let Some(s) = state.as_mut() {
            s.apply_gate(gate);
        }
        let p = if gate.is_two_qubit() { noise.p2 } else { noise.p1 };
        if p == 0.0 || unit(rng) >= p {
            continue;
        }
        let s = state.get_or_insert_with(|| match prefixes {
            Some(prefixes) => prefixes[i + 1].clone(),
            None => {
                let mut s = StateVector::zero(n);
                gates[..=i].iter().for_each(|g| s.apply_gate(g));
                s
            }
        });
        match gate.qubits() {
            (q, None) => {
                // X, Y or Z with equal probability.
                let pick = 1 + (unit(rng) * 3.0) as usize;
                s.apply_pauli(q, Pauli::from_index(pick.min(3)));
            }
            (a, Some(b)) => {
                // One of the 15 non-identity two-qubit Paulis.
                let pick = 1 + ((unit(rng) * 15.0) as usize).min(14);
                s.apply_pauli(a, Pauli::from_index(pick >> 2));
                s.apply_pauli(b, Pauli::from_index(pick & 3));
            }
        }
    }
    state
}
