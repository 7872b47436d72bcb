//! Reduced states, subsystem entropies and Schmidt decompositions.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ket::{check_labels, complement, Ket};
use crate::linalg::{ComplexMatrix, HermitianMatrix, ZERO};

/// Schmidt coefficients at or below this are dropped.
pub const SCHMIDT_CUTOFF: f64 = 1e-9;

const TRACE_TOL: f64 = 1e-8;
const NEGATIVE_EIG_TOL: f64 = 1e-8;

/// A split of labels `1..=n` into two non-empty sides.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    n_qubits: usize,
    side_a: Vec<usize>,
    side_b: Vec<usize>,
}

impl Bipartition {
    /// `side_b` is the complement of `side_a`.
    pub fn new(n_qubits: usize, side_a: &[usize]) -> Result<Self> {
        let side_a = check_labels(n_qubits, side_a)?;
        if side_a.is_empty() || side_a.len() == n_qubits {
            return Err(Error::InvalidLabels(format!(
                "{side_a:?} must be a non-empty strict subset of 1..={n_qubits}"
            )));
        }
        let side_b = complement(n_qubits, &side_a);
        Ok(Self {
            n_qubits,
            side_a,
            side_b,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[usize] {
        &self.side_b
    }

    /// The side with fewer qubits; on a tie, the side holding qubit 1.
    pub fn smaller_side(&self) -> &[usize] {
        if self.side_b.len() < self.side_a.len() {
            &self.side_b
        } else if self.side_a.len() < self.side_b.len() || self.side_a.contains(&1) {
            &self.side_a
        } else {
            &self.side_b
        }
    }

    pub fn flipped(&self) -> Self {
        Self {
            n_qubits: self.n_qubits,
            side_a: self.side_b.clone(),
            side_b: self.side_a.clone(),
        }
    }

    /// Whether `labels` (in any order) is one side of this cut.
    pub fn has_side(&self, labels: &[usize]) -> bool {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        sorted == self.side_a || sorted == self.side_b
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| v.iter().map(|l| l.to_string()).collect::<String>();
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

/// Amplitudes of `state` arranged as a `2^|a| x 2^|b|` matrix, with both
/// sides' qubits in the given order.
pub fn coefficient_matrix(state: &Ket, side_a: &[usize], side_b: &[usize]) -> Result<ComplexMatrix> {
    let order: Vec<usize> = side_a.iter().chain(side_b).copied().collect();
    let grouped = state.reorder(&order)?;
    ComplexMatrix::from_vec(1 << side_a.len(), 1 << side_b.len(), grouped.into_amplitudes())
}

/// Reduced density matrix on `keep`, qubits in ascending label order.
pub fn partial_trace(state: &Ket, keep: &[usize]) -> Result<HermitianMatrix> {
    let cut = Bipartition::new(state.n_qubits(), keep)?;
    let m = coefficient_matrix(state, cut.side_a(), cut.side_b())?;
    let rho = m.matmul(&m.adjoint())?;
    Ok(HermitianMatrix::symmetrized(rho))
}

/// `-sum lambda log2 lambda` over the spectrum of `rho`, with `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &HermitianMatrix) -> Result<f64> {
    let trace = rho.trace();
    if (trace - 1.0).abs() > TRACE_TOL {
        return Err(Error::TraceNotOne { trace });
    }
    let values = rho.eigen().values;
    if let Some(&lowest) = values.last() {
        if lowest < -NEGATIVE_EIG_TOL {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
    }
    let s = shannon_bits(values.iter().copied());
    let max = (rho.dim() as f64).log2();
    Ok(s.clamp(0.0, max))
}

/// Shannon entropy in bits of a probability list, skipping non-positive entries.
pub fn shannon_bits(probabilities: impl IntoIterator<Item = f64>) -> f64 {
    -probabilities
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p * p.log2())
        .sum::<f64>()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub side_a: Vec<usize>,
    pub side_b: Vec<usize>,
    pub entropy_bits: f64,
}

/// Entropy of every bipartition class of a pure state.
///
/// Each row's `side_a` holds qubit 1. Rows are ordered by the smaller side:
/// first by its size, then lexicographically, which gives `1, 2, ..., n`
/// followed by pairs `12, 13, ...` and so on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyTable {
    pub n_qubits: usize,
    pub rows: Vec<EntropyRow>,
}

impl EntropyTable {
    /// Entropy of the cut having `labels` on one side.
    pub fn get(&self, labels: &[usize]) -> Option<f64> {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        self.rows
            .iter()
            .find(|r| r.side_a == sorted || r.side_b == sorted)
            .map(|r| r.entropy_bits)
    }
}

pub fn entropy_table(state: &Ket) -> Result<EntropyTable> {
    let n = state.n_qubits();
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidLabels(format!(
            "entropy tables need 2 to 8 qubits, got {n}"
        )));
    }
    let mut cuts: Vec<Bipartition> = (0..(1usize << (n - 1)) - 1)
        .map(|mask| {
            let side_a: Vec<usize> = std::iter::once(1)
                .chain((2..=n).filter(|l| mask >> (l - 2) & 1 == 1))
                .collect();
            Bipartition::new(n, &side_a).expect("strict subset containing qubit 1")
        })
        .collect();
    cuts.sort_by(|x, y| {
        let (sx, sy) = (x.smaller_side(), y.smaller_side());
        sx.len().cmp(&sy.len()).then_with(|| sx.cmp(sy))
    });
    let rows = cuts
        .into_iter()
        .map(|cut| {
            let rho = partial_trace(state, cut.smaller_side())?;
            Ok(EntropyRow {
                entropy_bits: von_neumann_entropy(&rho)?,
                side_a: cut.side_a,
                side_b: cut.side_b,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyTable { n_qubits: n, rows })
}

/// `state = sum_l c_l |left_l> ⊗ |right_l>` across `partition`.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    pub partition: Bipartition,
    /// Positive, descending.
    pub coefficients: Vec<f64>,
    /// States on `partition.side_a()`, qubits in ascending label order.
    pub left_basis: Vec<Ket>,
    /// States on `partition.side_b()`, qubits in ascending label order.
    pub right_basis: Vec<Ket>,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn entropy_bits(&self) -> f64 {
        shannon_bits(self.coefficients.iter().map(|c| c * c))
    }

    /// Rebuilds the state in the original qubit order.
    pub fn reconstruct(&self) -> Ket {
        let n = self.partition.n_qubits();
        let dim_b = 1usize << self.partition.side_b().len();
        let mut grouped = vec![ZERO; 1 << n];
        for ((c, left), right) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            for (a, &x) in left.amplitudes().iter().enumerate() {
                for (b, &y) in right.amplitudes().iter().enumerate() {
                    grouped[a * dim_b + b] += x * y * *c;
                }
            }
        }
        // grouped qubit j+1 is label order[j]; invert that permutation
        let order: Vec<usize> = self
            .partition
            .side_a()
            .iter()
            .chain(self.partition.side_b())
            .copied()
            .collect();
        let mut inverse = vec![0; n];
        for (pos, &label) in order.iter().enumerate() {
            inverse[label - 1] = pos + 1;
        }
        Ket::from_raw(n, grouped)
            .reorder(&inverse)
            .expect("inverse is a permutation")
    }
}

/// Schmidt decomposition via the eigenbasis of the smaller side's reduced
/// matrix. Partner vectors come from projecting the state onto each
/// eigenvector; coefficients are the norms of those projections.
pub fn schmidt_decompose(state: &Ket, partition: &Bipartition) -> Result<SchmidtForm> {
    if partition.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.n_qubits(),
            found: partition.n_qubits(),
        });
    }
    let m = coefficient_matrix(state, partition.side_a(), partition.side_b())?;
    let diag_left = m.rows() <= m.cols();

    // `work` has the diagonalized side as rows.
    let work = if diag_left { m.clone() } else { transpose(&m) };
    let rho = HermitianMatrix::symmetrized(work.matmul(&work.adjoint())?);
    let eigen = rho.eigen();

    let mut terms: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = Vec::new();
    for u in eigen.vectors {
        // partner[b] = sum_a conj(u[a]) work[a][b]
        let partner: Vec<Complex64> = (0..work.cols())
            .map(|b| (0..work.rows()).map(|a| u[a].conj() * work[(a, b)]).sum())
            .collect();
        let c = crate::linalg::norm(&partner);
        if c <= SCHMIDT_CUTOFF {
            continue;
        }
        let partner: Vec<Complex64> = partner.into_iter().map(|z| z / c).collect();
        if diag_left {
            terms.push((c, u, partner));
        } else {
            terms.push((c, partner, u));
        }
    }

    terms.sort_by(|x, y| {
        quantize(y.0)
            .cmp(&quantize(x.0))
            .then_with(|| compare_vectors(&y.1, &x.1))
    });

    let n_a = partition.side_a().len();
    let n_b = partition.side_b().len();
    let mut coefficients = Vec::with_capacity(terms.len());
    let mut left_basis = Vec::with_capacity(terms.len());
    let mut right_basis = Vec::with_capacity(terms.len());
    for (c, left, right) in terms {
        coefficients.push(c);
        left_basis.push(Ket::from_amplitudes(n_a, left)?);
        right_basis.push(Ket::from_amplitudes(n_b, right)?);
    }
    Ok(SchmidtForm {
        partition: partition.clone(),
        coefficients,
        left_basis,
        right_basis,
    })
}

fn transpose(m: &ComplexMatrix) -> ComplexMatrix {
    let mut t = ComplexMatrix::zeros(m.cols(), m.rows());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            t[(j, i)] = m[(i, j)];
        }
    }
    t
}

fn quantize(x: f64) -> i64 {
    (x * 1e9).round() as i64
}

/// Lexicographic order on amplitudes rounded to 1e-9 (real part, then imaginary).
fn compare_vectors(a: &[Complex64], b: &[Complex64]) -> Ordering {
    let key = |v: &[Complex64]| -> Vec<(i64, i64)> { v.iter().map(|z| (quantize(z.re), quantize(z.im))).collect() };
    key(a).cmp(&key(b))
}
