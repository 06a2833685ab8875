use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use super::circuit::{Gate, LoweredRegion, Op, QuantumCircuit};
use super::{SynthError, ANGLE_EPSILON};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    /// Rotations with `|θ|` below this are removed.
    pub angle_epsilon: f64,
    /// Also remove near-zero rotations inside a lowered multiplexor region.
    /// Off by default, which keeps every region at its full `2^(k+1)` gates.
    pub prune_region_interior: bool,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { angle_epsilon: ANGLE_EPSILON, prune_region_interior: false }
    }
}

struct Slot {
    gate: Gate,
    region: Option<usize>,
}

/// Peephole passes on a lowered circuit, run to a fixpoint:
///
/// 1. a region lowered from an equal-angle multiplexor becomes one `Ry`;
/// 2. near-zero `Ry` rotations are dropped;
/// 3. a CX followed (on both of its qubits) by an identical CX cancels;
/// 4. `Ry(π/2)` as the first gate on a qubit becomes `H`, which prepares
///    the same `|+⟩` from `|0⟩`.
///
/// The measurement distribution is unchanged.
pub fn optimize(circuit: &QuantumCircuit, options: &OptimizeOptions) -> Result<QuantumCircuit, SynthError> {
    let gates = circuit.gates()?;
    let eps = options.angle_epsilon;

    let mut slots: Vec<Slot> = Vec::with_capacity(gates.len());
    let mut region_targets = Vec::new();
    let mut i = 0;
    while i < gates.len() {
        match circuit.regions().iter().find(|r| r.range.start == i && !r.range.is_empty()) {
            Some(region) => {
                match region.uniform_angle {
                    Some(theta) => slots.push(Slot {
                        gate: Gate::Ry { qubit: region.target, theta },
                        region: None,
                    }),
                    None => {
                        let id = region_targets.len();
                        region_targets.push(region.target);
                        slots.extend(
                            gates[region.range.clone()].iter().map(|&gate| Slot { gate, region: Some(id) }),
                        );
                    }
                }
                i = region.range.end;
            }
            None => {
                slots.push(Slot { gate: gates[i], region: None });
                i += 1;
            }
        }
    }

    loop {
        let mut changed = false;

        let before = slots.len();
        slots.retain(|s| {
            let prunable = s.region.is_none() || options.prune_region_interior;
            !(prunable && is_identity_rotation(&s.gate, eps))
        });
        changed |= slots.len() != before;

        changed |= cancel_cx_pairs(&mut slots);

        for q in 0..circuit.n_qubits() {
            if let Some(slot) = slots.iter_mut().find(|s| s.gate.touches(q)) {
                if let Gate::Ry { qubit, theta } = slot.gate {
                    if (theta - FRAC_PI_2).abs() < eps {
                        slot.gate = Gate::H { qubit };
                        changed = true;
                    }
                }
            }
        }

        if !changed {
            break;
        }
    }

    let mut regions: Vec<LoweredRegion> = Vec::new();
    for (id, &target) in region_targets.iter().enumerate() {
        let mut positions = slots.iter().enumerate().filter(|(_, s)| s.region == Some(id)).map(|(p, _)| p);
        if let Some(start) = positions.next() {
            let end = positions.next_back().unwrap_or(start) + 1;
            regions.push(LoweredRegion { range: start..end, target, uniform_angle: None });
        }
    }
    let ops = slots.into_iter().map(|s| Op::Gate(s.gate)).collect();
    Ok(QuantumCircuit::from_parts(circuit.n_qubits(), ops, regions, circuit.measured))
}

fn is_identity_rotation(gate: &Gate, eps: f64) -> bool {
    match *gate {
        Gate::Ry { theta, .. } => theta.abs() < eps,
        Gate::U3 { theta, phi, lambda, .. } => theta.abs() < eps && (phi + lambda).abs() < eps,
        _ => false,
    }
}

fn cancel_cx_pairs(slots: &mut Vec<Slot>) -> bool {
    let mut removed = alloc::vec![false; slots.len()];
    let mut any = false;
    for i in 0..slots.len() {
        if removed[i] {
            continue;
        }
        let Gate::Cx { control, target } = slots[i].gate else { continue };
        let next = (i + 1..slots.len())
            .find(|&j| !removed[j] && (slots[j].gate.touches(control) || slots[j].gate.touches(target)));
        if let Some(j) = next {
            if slots[j].gate == slots[i].gate {
                removed[i] = true;
                removed[j] = true;
                any = true;
            }
        }
    }
    if any {
        let mut idx = 0;
        slots.retain(|_| {
            let keep = !removed[idx];
            idx += 1;
            keep
        });
    }
    any
}
