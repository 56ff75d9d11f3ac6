//! Standard one- and two-qubit gates and qubit-level embedding.

use crate::mat::{ComplexMatrix, C64, ONE, ZERO};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_vec(vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap()
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn hadamard() -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, &[h, h, h, -h])
}

pub fn phase_s() -> ComplexMatrix {
    ComplexMatrix::from_diag(&[ONE, C64::new(0.0, 1.0)])
}

/// CNOT with the control on the more significant qubit.
pub fn cnot() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

/// Swap of two registers of dimension `d` each.
pub fn swap_registers(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            m[(j * d + i, i * d + j)] = ONE;
        }
    }
    m
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ U`, control on the most significant qubit.
pub fn controlled(u: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(u.dim()).direct_sum(u)
}

/// `G = CNOT^{⊗n} (H^{⊗n} ⊗ I)`, mapping `|0⟩_{2n}` to the maximally entangled state
/// `N^{-1/2} Σ_j |j⟩|j⟩`.
pub fn max_entangler(n: usize) -> ComplexMatrix {
    let nn = 1usize << n;
    let mut h = ComplexMatrix::identity(1);
    for _ in 0..n {
        h = h.kron(&hadamard());
    }
    let hn = h.kron(&ComplexMatrix::identity(nn));
    // Qubit k of the first register controls qubit k of the second.
    let mut cn = ComplexMatrix::zeros(nn * nn);
    for i in 0..nn {
        for j in 0..nn {
            cn[(i * nn + (i ^ j), i * nn + j)] = ONE;
        }
    }
    cn.matmul(&hn)
}

/// Embeds `op`, acting on the ordered qubits `targets`, into an operator on
/// `total` qubits. Qubit 0 is the most significant.
pub fn embed(op: &ComplexMatrix, targets: &[usize], total: usize) -> ComplexMatrix {
    let k = targets.len();
    assert_eq!(op.dim(), 1 << k, "operator size does not match target count");
    assert!(targets.iter().all(|&t| t < total), "target out of range");
    let dim = 1usize << total;
    let shifts: Vec<usize> = targets.iter().map(|&t| total - 1 - t).collect();
    let mask: usize = shifts.iter().map(|&s| 1usize << s).sum();
    let sub_index = |x: usize| -> usize {
        shifts.iter().fold(0usize, |acc, &s| (acc << 1) | ((x >> s) & 1))
    };
    let spread = |y: usize| -> usize {
        shifts
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &s)| acc | (((y >> (k - 1 - i)) & 1) << s))
    };
    let mut out = ComplexMatrix::zeros(dim);
    for col in 0..dim {
        let rest = col & !mask;
        let c_sub = sub_index(col);
        for r_sub in 0..(1usize << k) {
            let z = op[(r_sub, c_sub)];
            if z != ZERO {
                out[(rest | spread(r_sub), col)] = z;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{basis_vector, op_norm};

    #[test]
    fn entangler_prepares_bell_pairs() {
        for n in 1..=2 {
            let g = max_entangler(n);
            let nn = 1 << n;
            let out = g.mul_vec(&basis_vector(nn * nn, 0));
            for i in 0..nn {
                for j in 0..nn {
                    let want = if i == j { 1.0 / (nn as f64).sqrt() } else { 0.0 };
                    assert!((out[i * nn + j].re - want).abs() < 1e-14);
                }
            }
            assert!(g.is_unitary(1e-12));
        }
    }

    #[test]
    fn embed_matches_kron_on_adjacent_qubits() {
        let x = pauli_x();
        let e = embed(&x, &[1], 3);
        let k = ComplexMatrix::identity(2).kron(&x).kron(&ComplexMatrix::identity(2));
        assert!(op_norm(&(&e - &k)) < 1e-15);
        // Reversed target order swaps control and target.
        let c = embed(&cnot(), &[1, 0], 2);
        let mut want = ComplexMatrix::zeros(4);
        want[(0, 0)] = ONE;
        want[(3, 1)] = ONE;
        want[(2, 2)] = ONE;
        want[(1, 3)] = ONE;
        assert!(op_norm(&(&c - &want)) < 1e-15);
    }

    #[test]
    fn swap_is_involution() {
        let s = swap_registers(3);
        assert!(op_norm(&(&s.matmul(&s) - &ComplexMatrix::identity(9))) < 1e-15);
    }
}
