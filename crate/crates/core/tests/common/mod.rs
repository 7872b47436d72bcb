//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qcomm_core::Ket;

/// Entropies printed in the reference table, columns
/// S(1), S(2), S(3), S(4), S(12), S(13), S(14).
pub const TABLE_I: [(&str, [f64; 7]); 5] = [
    ("GHZ4", [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
    ("OMEGA", [1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 1.0]),
    ("W4", [0.81, 0.81, 0.81, 0.81, 1.0, 1.0, 1.0]),
    ("S1", [0.81, 1.0, 0.81, 0.81, 1.5, 1.22, 1.22]),
    ("S2", [0.81, 1.0, 1.0, 1.0, 1.5, 1.5, 1.5]),
];

pub const TABLE_I_COLUMNS: [&[usize]; 7] = [&[1], &[2], &[3], &[4], &[1, 2], &[1, 3], &[1, 4]];

/// Reduced density matrix by summing over every pair of full basis indices
/// that agree on the traced-out qubits.
pub fn brute_partial_trace(state: &Ket, keep: &[usize]) -> DMatrix<Complex64> {
    let n = state.n_qubits();
    let bit = |idx: usize, label: usize| (idx >> (n - label)) & 1;
    let d = 1 << keep.len();
    let mut rho = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    let amps = state.amplitudes();
    for i in 0..amps.len() {
        for j in 0..amps.len() {
            let traced_equal = (1..=n).filter(|l| !keep.contains(l)).all(|l| bit(i, l) == bit(j, l));
            if !traced_equal {
                continue;
            }
            let r = keep.iter().fold(0, |acc, &l| (acc << 1) | bit(i, l));
            let c = keep.iter().fold(0, |acc, &l| (acc << 1) | bit(j, l));
            rho[(r, c)] += amps[i] * amps[j].conj();
        }
    }
    rho
}

/// Eigenvalues of a Hermitian matrix via nalgebra.
pub fn oracle_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

pub fn oracle_entropy(state: &Ket, keep: &[usize]) -> f64 {
    oracle_eigenvalues(&brute_partial_trace(state, keep))
        .into_iter()
        .filter(|&p| p > 1e-14)
        .map(|p| -p * p.log2())
        .sum()
}

/// Maximum clique by checking every subset; the witness is the
/// lexicographically smallest sorted index list among maximum cliques.
pub fn brute_force_clique(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> (usize, Vec<usize>) {
    assert!(n <= 16);
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u32..(1 << n) {
        let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let is_clique = members
            .iter()
            .enumerate()
            .all(|(a, &i)| members[a + 1..].iter().all(|&j| adjacent(i, j)));
        if !is_clique {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => members.len() > b.len() || (members.len() == b.len() && members < *b),
        };
        if better {
            best = Some(members);
        }
    }
    let best = best.unwrap_or_default();
    (best.len(), best)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
