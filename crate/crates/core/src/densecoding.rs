//! Superdense coding capacity with Pauli encodings.
//!
//! The sender applies a Pauli string to their qubits of a shared resource.
//! The capacity is `log2 k`, where `k` is the largest set of encodings that
//! are pairwise orthogonal, found as an exact maximum clique.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::entropy::{partial_trace, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::ket::{self, Ket};
use crate::linalg::{pauli, ComplexMatrix, EPS_ORTHO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// `Y` is `sigma_2` itself; the `i` in `i sigma_2` is a global phase.
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            Pauli::I => pauli::identity(),
            Pauli::X => pauli::x(),
            Pauli::Y => pauli::y(),
            Pauli::Z => pauli::z(),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// One letter per sender qubit, in ascending label order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString(pub Vec<Pauli>);

impl PauliString {
    /// The `index`-th string of length `len` in lexicographic order (I < X < Y < Z).
    pub fn from_index(index: usize, len: usize) -> Self {
        PauliString((0..len).rev().map(|pos| Pauli::ALL[(index >> (2 * pos)) & 3]).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Applies the string to `labels` of `state`, letter `i` on `labels[i]`.
    pub fn apply(&self, state: &Ket, labels: &[usize]) -> Result<Ket> {
        if labels.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: labels.len(),
            });
        }
        let mut out = state.clone();
        for (&p, &label) in self.0.iter().zip(labels) {
            if p != Pauli::I {
                out = out.apply_single(label, &p.matrix())?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|p| write!(f, "{}", p.letter()))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn check_sender(resource: &Ket, sender: &[usize]) -> Result<Vec<usize>> {
    let sorted = ket::check_labels(resource.n_qubits(), sender)?;
    if sorted.is_empty() || sorted.len() == resource.n_qubits() {
        return Err(Error::InvalidLabels(format!(
            "sender {sender:?} must be a non-empty strict subset of 1..={}",
            resource.n_qubits()
        )));
    }
    Ok(sorted)
}

/// All `4^k` encoded states, in lexicographic Pauli-string order.
pub fn enumerate_encodings(resource: &Ket, sender: &[usize]) -> Result<Vec<(PauliString, Ket)>> {
    let sender = check_sender(resource, sender)?;
    let k = sender.len();
    (0..1usize << (2 * k))
        .map(|idx| {
            let s = PauliString::from_index(idx, k);
            let state = s.apply(resource, &sender)?;
            Ok((s, state))
        })
        .collect()
}

/// Fixed-width bitset over vertex indices.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

struct CliqueSearch {
    adjacency: Vec<Bits>,
    best: Vec<usize>,
}

impl CliqueSearch {
    /// Upper bound on the clique number of `p`: colors used by greedy
    /// sequential coloring.
    fn color_bound(&self, p: &Bits) -> usize {
        let mut uncolored = p.clone();
        let mut colors = 0;
        while !uncolored.is_empty() {
            colors += 1;
            let mut class = uncolored.clone();
            while let Some(v) = class.first() {
                class.clear(v);
                uncolored.clear(v);
                class.and_not(&self.adjacency[v]);
            }
        }
        colors
    }

    /// Extends `current` with vertices of `p`, smallest index first. Every
    /// vertex of `p` is larger than every vertex of `current`, so cliques are
    /// visited in lexicographic order and the first maximum found is the
    /// lexicographically smallest.
    fn expand(&mut self, current: &mut Vec<usize>, p: Bits) {
        if p.is_empty() {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        }
        let mut rest = p;
        if current.len() + rest.count() <= self.best.len() || current.len() + self.color_bound(&rest) <= self.best.len()
        {
            return;
        }
        while let Some(v) = rest.first() {
            rest.clear(v);
            let next = rest.and(&self.adjacency[v]);
            current.push(v);
            self.expand(current, next);
            current.pop();
            if current.len() + rest.count() <= self.best.len()
                || current.len() + self.color_bound(&rest) <= self.best.len()
            {
                break;
            }
        }
    }
}

/// Maximum set of pairwise orthogonal states (`|<a|b>| <= EPS_ORTHO`).
/// Returns the size and the lexicographically smallest witness.
pub fn max_orthogonal_set(encodings: &[Ket]) -> Result<(usize, Vec<usize>)> {
    let n = encodings.len();
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    let dim = encodings[0].dim();
    if let Some(bad) = encodings.iter().find(|k| k.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    let mut adjacency = vec![Bits::empty(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if encodings[i].inner(&encodings[j]).norm() <= EPS_ORTHO {
                adjacency[i].set(j);
                adjacency[j].set(i);
            }
        }
    }
    Ok(max_clique(adjacency))
}

fn max_clique(adjacency: Vec<Bits>) -> (usize, Vec<usize>) {
    let n = adjacency.len();
    let mut all = Bits::empty(n);
    (0..n).for_each(|i| all.set(i));
    let mut search = CliqueSearch {
        adjacency,
        best: Vec::new(),
    };
    search.expand(&mut Vec::new(), all);
    (search.best.len(), search.best)
}

/// Maximum clique of a graph given as an adjacency predicate on `0..n`.
pub fn max_clique_of(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> (usize, Vec<usize>) {
    let mut adjacency = vec![Bits::empty(n); n];
    for (i, row) in adjacency.iter_mut().enumerate() {
        for j in 0..n {
            if i != j && adjacent(i, j) {
                row.set(j);
            }
        }
    }
    max_clique(adjacency)
}

#[derive(Clone, Debug, Serialize)]
pub struct SdcReport {
    pub sender_qubits: Vec<usize>,
    #[serde(skip)]
    pub encodings: Vec<Ket>,
    pub witness: Vec<PauliString>,
    pub witness_indices: Vec<usize>,
    pub k_orthogonal: usize,
    pub capacity_cbits: f64,
    pub sender_entropy_bits: f64,
}

pub fn sdc_report(resource: &Ket, sender: &[usize]) -> Result<SdcReport> {
    let sender = check_sender(resource, sender)?;
    let (strings, encodings): (Vec<PauliString>, Vec<Ket>) =
        enumerate_encodings(resource, &sender)?.into_iter().unzip();
    let (k, witness_indices) = max_orthogonal_set(&encodings)?;
    let entropy = von_neumann_entropy(&partial_trace(resource, &sender)?)?;
    Ok(SdcReport {
        witness: witness_indices.iter().map(|&i| strings[i].clone()).collect(),
        sender_qubits: sender,
        encodings,
        witness_indices,
        k_orthogonal: k,
        capacity_cbits: (k as f64).log2(),
        sender_entropy_bits: entropy,
    })
}

impl SdcReport {
    /// Encodes `message` with its witness string, then decodes by the largest
    /// overlap with the witness states.
    pub fn roundtrip(&self, resource: &Ket, message: usize) -> Result<usize> {
        let string = self.witness.get(message).ok_or(Error::MessageOutOfRange {
            message,
            available: self.k_orthogonal,
        })?;
        let sent = string.apply(resource, &self.sender_qubits)?;
        Ok(self.decode(&sent))
    }

    /// Index into the witness of the state closest to `received`.
    pub fn decode(&self, received: &Ket) -> usize {
        self.witness_indices
            .iter()
            .map(|&i| self.encodings[i].inner(received).norm_sqr())
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |best, (i, p)| if p > best.1 { (i, p) } else { best },
            )
            .0
    }
}

pub fn simulate_sdc_roundtrip(resource: &Ket, sender: &[usize], message: usize) -> Result<usize> {
    sdc_report(resource, sender)?.roundtrip(resource, message)
}
