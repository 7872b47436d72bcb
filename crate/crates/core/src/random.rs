//! Seeded random states and operators.
//!
//! All randomness in this crate flows through [`seeded`], a ChaCha8 stream
//! keyed by `rand_chacha`'s `seed_from_u64`, so a seed reproduces a run
//! bit-for-bit.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ket::Ket;
use crate::linalg::{self, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unit vector of length `dim` with i.i.d. complex Gaussian components before normalization.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        let len = linalg::norm(&v);
        if len > 1e-12 {
            return v.into_iter().map(|z| z / len).collect();
        }
    }
}

/// Haar-random pure state on `n_qubits`.
pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, n_qubits: usize) -> Ket {
    let amps = unit_vector(rng, 1 << n_qubits);
    Ket::from_amplitudes(n_qubits, amps).expect("unit vector")
}

/// Haar-random unitary: QR (Gram-Schmidt) of a complex Gaussian matrix.
/// Columns come out orthonormal with the phase convention of Gram-Schmidt,
/// which already yields the Haar measure.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while columns.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        for _ in 0..2 {
            for c in &columns {
                let overlap = linalg::inner(c, &v);
                for (x, &ck) in v.iter_mut().zip(c) {
                    *x -= overlap * ck;
                }
            }
        }
        let len = linalg::norm(&v);
        if len > 1e-8 {
            columns.push(v.into_iter().map(|z| z / len).collect());
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            u[(i, j)] = z;
        }
    }
    u
}

/// `(G + G^dagger) / 2` for a complex Gaussian `G`.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = gaussian_complex(rng);
        }
    }
    let h = g.add(&g.adjoint()).expect("same shape");
    h.scale(Complex64::new(0.5, 0.0))
}
