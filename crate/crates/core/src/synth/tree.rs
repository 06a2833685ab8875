use alloc::vec;
use alloc::vec::Vec;

use crate::pmf::AmplitudeVector;

/// Half-angles of the binary splitting tree.
///
/// Level `j` has `2^j` nodes. Node `i` of level `j` covers the bins whose top
/// `j` index bits equal `i`, and its angle `θ` satisfies
/// `cos²θ = mass(left half) / mass(node)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationTree {
    levels: Vec<Vec<f64>>,
}

impl RotationTree {
    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Rebuild leaf amplitudes from the cos/sin products along each path.
    pub fn amplitudes(&self) -> Vec<f64> {
        let n = self.levels.len();
        (0..1usize << n)
            .map(|leaf| {
                (0..n).fold(1.0, |acc, j| {
                    let node = leaf >> (n - j);
                    let theta = self.levels[j][node];
                    if (leaf >> (n - 1 - j)) & 1 == 0 {
                        acc * libm::cos(theta)
                    } else {
                        acc * libm::sin(theta)
                    }
                })
            })
            .collect()
    }
}

/// Angles `θ = arccos √f` for every node, `f` being the left share of the
/// node's probability mass. Nodes without mass get `θ = 0`.
pub fn compute_rotation_tree(amps: &AmplitudeVector) -> RotationTree {
    let n = amps.qubits() as usize;
    // masses[j][i]: probability mass of node i at level j; masses[n] are the bins.
    let mut masses: Vec<Vec<f64>> = vec![Vec::new(); n + 1];
    masses[n] = amps.probabilities();
    for j in (0..n).rev() {
        masses[j] = masses[j + 1].chunks_exact(2).map(|p| p[0] + p[1]).collect();
    }
    let levels = (0..n)
        .map(|j| {
            (0..1usize << j)
                .map(|i| {
                    let left = masses[j + 1][2 * i];
                    let right = masses[j + 1][2 * i + 1];
                    if left + right == 0.0 {
                        0.0
                    } else {
                        // Same as arccos √(left / (left + right)) but keeps
                        // precision when one side is tiny.
                        libm::atan2(libm::sqrt(right), libm::sqrt(left))
                    }
                })
                .collect()
        })
        .collect();
    RotationTree { levels }
}
