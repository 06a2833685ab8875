use alloc::vec::Vec;

use super::circuit::{Gate, LoweredRegion, Multiplexor, Op, QuantumCircuit};
use super::ANGLE_EPSILON;

/// `i`-th word of the reflected binary gray code.
pub fn gray_code(i: usize) -> usize {
    i ^ (i >> 1)
}

/// Rotation angles of the gray-code decomposition:
/// `αᵢ = 2⁻ᵏ Σⱼ (−1)^(g(i)·j) θⱼ`.
pub fn gray_angles(angles: &[f64]) -> Vec<f64> {
    let len = angles.len();
    debug_assert!(len.is_power_of_two());
    // In-place Walsh-Hadamard transform: w[s] = Σⱼ (−1)^popcount(s & j) θⱼ.
    let mut w = angles.to_vec();
    let mut half = 1;
    while half < len {
        for block in (0..len).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (w[i], w[i + half]);
                w[i] = a + b;
                w[i + half] = a - b;
            }
        }
        half *= 2;
    }
    let scale = 1.0 / len as f64;
    (0..len).map(|i| w[gray_code(i)] * scale).collect()
}

/// Gates implementing one multiplexor: `Ry(α₀) CX Ry(α₁) CX …`, the `i`-th
/// CX controlled by the qubit whose bit flips between `g(i)` and `g(i+1)`
/// (cyclically), so the last CX returns to `g(0)`.
pub fn lower_multiplexor(mux: &Multiplexor) -> Vec<Gate> {
    let k = mux.controls.len();
    if k == 0 {
        return alloc::vec![Gate::Ry { qubit: mux.target, theta: mux.angles[0] }];
    }
    let len = 1usize << k;
    let alphas = gray_angles(&mux.angles);
    let mut gates = Vec::with_capacity(2 * len);
    for (i, alpha) in alphas.into_iter().enumerate() {
        gates.push(Gate::Ry { qubit: mux.target, theta: alpha });
        let flip = gray_code(i) ^ gray_code((i + 1) % len);
        let bit = flip.trailing_zeros() as usize;
        // Bit 0 of the angle index is the last control.
        gates.push(Gate::Cx { control: mux.controls[k - 1 - bit], target: mux.target });
    }
    gates
}

/// Replace every multiplexor with its gray-code expansion.
///
/// Each expansion is recorded as a [`LoweredRegion`] so later passes know
/// which gates came from the same multiplexor and whether it was uniform.
pub fn lower(circuit: &QuantumCircuit) -> QuantumCircuit {
    let mut ops = Vec::with_capacity(circuit.len());
    let mut regions: Vec<LoweredRegion> = circuit.regions().to_vec();
    for op in circuit.ops() {
        match op {
            Op::Gate(g) => ops.push(Op::Gate(*g)),
            Op::Multiplexor(mux) => {
                let gates = lower_multiplexor(mux);
                if !mux.controls.is_empty() {
                    let first = mux.angles[0];
                    let uniform = mux.angles.iter().all(|a| (a - first).abs() <= ANGLE_EPSILON);
                    regions.push(LoweredRegion {
                        range: ops.len()..ops.len() + gates.len(),
                        target: mux.target,
                        uniform_angle: uniform.then_some(first),
                    });
                }
                ops.extend(gates.into_iter().map(Op::Gate));
            }
        }
    }
    QuantumCircuit::from_parts(circuit.n_qubits(), ops, regions, circuit.measured)
}
