//! Pure states on labeled qubits.
//!
//! Qubit `1` is the leftmost character of a ket and the most significant bit
//! of the amplitude index: in `|q1 q2 ... qn>` the index is
//! `q1 * 2^(n-1) + ... + qn`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix, EPS_NORM, ONE, ZERO};

/// Largest register this crate will allocate.
pub const MAX_QUBITS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KetRepr", into = "KetRepr")]
pub struct Ket {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl Ket {
    /// Wraps `amplitudes`, requiring unit norm within [`EPS_NORM`].
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_length(n_qubits, amplitudes.len())?;
        let norm = linalg::norm(&amplitudes);
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm; returns the state and the input norm.
    pub fn normalized(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<(Self, f64)> {
        check_length(n_qubits, amplitudes.len())?;
        let norm = linalg::norm(&amplitudes);
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok((Self { n_qubits, amplitudes }, norm))
    }

    /// Skips the norm check; for internal results whose norm is already
    /// controlled by construction.
    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self { n_qubits, amplitudes }
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_length(n_qubits, 1 << n_qubits.min(MAX_QUBITS))?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    pub fn inner(&self, other: &Ket) -> Complex64 {
        linalg::inner(&self.amplitudes, &other.amplitudes)
    }

    /// `self ⊗ other`; `self` supplies the leading qubits.
    pub fn tensor(&self, other: &Ket) -> Result<Ket> {
        let n = self.n_qubits + other.n_qubits;
        check_length(n, self.dim() * other.dim())?;
        Ok(Ket {
            n_qubits: n,
            amplitudes: linalg::kron_vec(&self.amplitudes, &other.amplitudes),
        })
    }

    /// Largest amplitude-wise distance; infinite for different registers.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Multiplies every amplitude by `phase`.
    pub fn with_phase(&self, phase: Complex64) -> Ket {
        Ket {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|&z| z * phase).collect(),
        }
    }

    /// Reorders the qubits: qubit `j + 1` of the result is qubit `order[j]`
    /// of `self`. `order` must be a permutation of `1..=n`.
    pub fn reorder(&self, order: &[usize]) -> Result<Ket> {
        let n = self.n_qubits;
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (1..=n).collect::<Vec<_>>() {
            return Err(Error::InvalidLabels(format!(
                "{order:?} is not a permutation of 1..={n}"
            )));
        }
        let mut out = vec![ZERO; self.dim()];
        for (old_index, &amp) in self.amplitudes.iter().enumerate() {
            let mut new_index = 0usize;
            for &label in order {
                new_index = (new_index << 1) | bit_of(old_index, n, label);
            }
            out[new_index] = amp;
        }
        Ok(Ket {
            n_qubits: n,
            amplitudes: out,
        })
    }

    /// Applies a 2x2 operator to qubit `label`.
    pub fn apply_single(&self, label: usize, op: &ComplexMatrix) -> Result<Ket> {
        check_labels(self.n_qubits, &[label])?;
        if op.rows() != 2 || op.cols() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: op.rows() * op.cols(),
            });
        }
        let mask = 1usize << (self.n_qubits - label);
        let mut out = vec![ZERO; self.dim()];
        for i0 in (0..self.dim()).filter(|i| i & mask == 0) {
            let i1 = i0 | mask;
            let (a0, a1) = (self.amplitudes[i0], self.amplitudes[i1]);
            out[i0] = op[(0, 0)] * a0 + op[(0, 1)] * a1;
            out[i1] = op[(1, 0)] * a0 + op[(1, 1)] * a1;
        }
        Ok(Ket {
            n_qubits: self.n_qubits,
            amplitudes: out,
        })
    }
}

fn check_length(n_qubits: usize, len: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits,
            max: MAX_QUBITS,
        });
    }
    if n_qubits == 0 || len != 1usize << n_qubits {
        return Err(Error::AmplitudeLength { n_qubits, len });
    }
    Ok(())
}

/// Value (0 or 1) of qubit `label` inside basis index `index` of an `n`-qubit register.
#[inline]
pub fn bit_of(index: usize, n: usize, label: usize) -> usize {
    (index >> (n - label)) & 1
}

/// Gathers the bits of `labels` (in the given order) into a sub-register index.
#[inline]
pub fn sub_index(index: usize, n: usize, labels: &[usize]) -> usize {
    labels.iter().fold(0, |acc, &l| (acc << 1) | bit_of(index, n, l))
}

/// Validates 1-based labels for an `n`-qubit register and returns them sorted.
pub fn check_labels(n: usize, labels: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    if let Some(&bad) = sorted.iter().find(|&&l| l == 0 || l > n) {
        return Err(Error::InvalidLabels(format!("qubit {bad} outside 1..={n}")));
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidLabels(format!("duplicate label in {labels:?}")));
    }
    Ok(sorted)
}

/// Labels of `1..=n` not in `labels`.
pub fn complement(n: usize, labels: &[usize]) -> Vec<usize> {
    (1..=n).filter(|l| !labels.contains(l)).collect()
}

/// JSON interchange shape: `{"n_qubits": N, "amplitudes": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct KetRepr {
    n_qubits: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl From<Ket> for KetRepr {
    fn from(k: Ket) -> Self {
        KetRepr {
            n_qubits: k.n_qubits,
            amplitudes: k.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<KetRepr> for Ket {
    type Error = Error;

    fn try_from(r: KetRepr) -> Result<Self> {
        let amps: Vec<Complex64> = r.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        check_length(r.n_qubits, amps.len())?;
        let norm = linalg::norm(&amps);
        if (norm - 1.0).abs() <= EPS_NORM {
            // keep the file's bits untouched
            Ok(Ket {
                n_qubits: r.n_qubits,
                amplitudes: amps,
            })
        } else {
            Ket::normalized(r.n_qubits, amps).map(|(k, _)| k)
        }
    }
}
