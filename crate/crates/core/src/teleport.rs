//! Exact teleportation of an `m`-term `n`-qubit state through a multi-qubit
//! resource.
//!
//! Bob holds `n` qubits of an `N`-qubit resource, Alice the rest. The input
//! `sum_k alpha_k |eta_k>` is known to lie in the span of `m` orthonormal
//! target vectors. Teleportation is exact when the resource's Schmidt
//! spectrum across Alice|Bob is `m` coefficients equal to `1/sqrt(m)`.
//!
//! The measured register is `[input (n qubits), Alice (N - n qubits)]`, with
//! Alice's qubits in ascending label order. Active outcome `k * m + j` is the
//! generalized Bell vector
//! `(1/sqrt m) sum_l w^(jl) |eta_l> |chi_(l+k mod m)>`, `w = exp(2 pi i / m)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::entropy::{partial_trace, schmidt_decompose, von_neumann_entropy, Bipartition};
use crate::error::{Error, Result};
use crate::ket::{self, Ket};
use crate::linalg::{self, ComplexMatrix, EPS_NORM, EPS_ORTHO, ZERO};
use crate::random;

/// Tolerance on each Schmidt coefficient against `1/sqrt(m)`.
pub const SPECTRUM_TOL: f64 = 1e-9;
/// Tolerance on Bob's entropy against `log2 m`.
pub const ENTROPY_TOL: f64 = 1e-6;
/// Outcomes below this probability are treated as never occurring.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct TeleportTask {
    resource: Ket,
    bob_qubits: Vec<usize>,
    alice_qubits: Vec<usize>,
    target_basis: Vec<Ket>,
}

impl TeleportTask {
    /// Task whose input is spanned by the first `m` computational basis states.
    pub fn new(resource: Ket, bob_qubits: &[usize], m: usize) -> Result<Self> {
        let n = bob_qubits.len();
        if m == 0 || n >= usize::BITS as usize || m > 1usize << n {
            return Err(Error::InvalidTask(format!("m = {m} must be between 1 and 2^{n}")));
        }
        let target = (0..m).map(|i| Ket::basis(n, i)).collect::<Result<Vec<_>>>()?;
        Self::with_target_basis(resource, bob_qubits, target)
    }

    pub fn with_target_basis(resource: Ket, bob_qubits: &[usize], target_basis: Vec<Ket>) -> Result<Self> {
        let total = resource.n_qubits();
        let bob = ket::check_labels(total, bob_qubits)?;
        if bob.is_empty() || bob.len() == total {
            return Err(Error::InvalidTask(format!(
                "Bob's qubits {bob:?} must be a non-empty strict subset of 1..={total}"
            )));
        }
        let n = bob.len();
        let m = target_basis.len();
        if m == 0 || m > 1usize << n {
            return Err(Error::InvalidTask(format!("m = {m} must be between 1 and 2^{n}")));
        }
        if let Some(bad) = target_basis.iter().find(|k| k.n_qubits() != n) {
            return Err(Error::InvalidTask(format!(
                "target vectors must have {n} qubits, found {}",
                bad.n_qubits()
            )));
        }
        let gram = linalg::gram_matrix(&target_basis)?;
        let defect = gram.max_abs_diff(&ComplexMatrix::identity(m));
        if defect > EPS_ORTHO {
            return Err(Error::InvalidTask(format!(
                "target basis is not orthonormal (Gram defect {defect:e})"
            )));
        }
        Ok(Self {
            alice_qubits: ket::complement(total, &bob),
            resource,
            bob_qubits: bob,
            target_basis,
        })
    }

    pub fn resource(&self) -> &Ket {
        &self.resource
    }

    pub fn bob_qubits(&self) -> &[usize] {
        &self.bob_qubits
    }

    pub fn alice_qubits(&self) -> &[usize] {
        &self.alice_qubits
    }

    pub fn m(&self) -> usize {
        self.target_basis.len()
    }

    /// Qubits in the unknown input, equal to Bob's share.
    pub fn n(&self) -> usize {
        self.bob_qubits.len()
    }

    pub fn target_basis(&self) -> &[Ket] {
        &self.target_basis
    }

    fn partition(&self) -> Bipartition {
        Bipartition::new(self.resource.n_qubits(), &self.alice_qubits).expect("validated at construction")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub m: usize,
    pub bob_entropy_bits: f64,
    pub required_entropy_bits: f64,
    /// Schmidt coefficients across Alice|Bob, descending.
    pub schmidt_spectrum: Vec<f64>,
    /// Exactly `m` coefficients, each within [`SPECTRUM_TOL`] of `1/sqrt(m)`.
    pub structural_ok: bool,
    /// Bob's entropy within [`ENTROPY_TOL`] of `log2 m`.
    pub entropy_ok: bool,
}

/// Feasibility is the structural test. Entropy `log2 m` alone is also
/// reported but does not imply a uniform spectrum of rank `m`.
pub fn check_feasibility(task: &TeleportTask) -> Result<FeasibilityVerdict> {
    let m = task.m();
    let schmidt = schmidt_decompose(&task.resource, &task.partition())?;
    let target = 1.0 / (m as f64).sqrt();
    let structural_ok = schmidt.rank() == m && schmidt.coefficients.iter().all(|c| (c - target).abs() <= SPECTRUM_TOL);

    let entropy = von_neumann_entropy(&partial_trace(&task.resource, &task.bob_qubits)?)?;
    let required = (m as f64).log2();
    Ok(FeasibilityVerdict {
        feasible: structural_ok,
        m,
        bob_entropy_bits: entropy,
        required_entropy_bits: required,
        schmidt_spectrum: schmidt.coefficients,
        structural_ok,
        entropy_ok: (entropy - required).abs() <= ENTROPY_TOL,
    })
}

#[derive(Clone, Debug)]
pub struct MeasurementBasis {
    /// Orthonormal basis of the measured register; the first
    /// `active_count` entries are the generalized Bell vectors.
    pub vectors: Vec<Ket>,
    pub active_count: usize,
    /// Bob's correction for each active outcome, on his qubits in ascending
    /// label order.
    pub corrections: Vec<ComplexMatrix>,
    /// `(j, k)` for each active outcome.
    pub outcome_labels: Vec<(usize, usize)>,
    /// Alice-side Schmidt vectors `chi_l`.
    pub alice_basis: Vec<Ket>,
    /// Bob-side Schmidt vectors `mu_l`; the input's coefficients end up on these.
    pub bob_basis: Vec<Ket>,
}

/// Builds the measurement and corrections for a feasible task.
pub fn build_measurement_basis(task: &TeleportTask) -> Result<MeasurementBasis> {
    if !check_feasibility(task)?.feasible {
        return Err(Error::Infeasible { m: task.m() });
    }
    Ok(construct(task))
}

/// Same construction without the feasibility gate, using the `m` leading
/// Schmidt vectors (padded by basis completion if the rank is smaller).
/// For infeasible tasks the resulting protocol is not exact.
pub fn build_measurement_basis_unchecked(task: &TeleportTask) -> Result<MeasurementBasis> {
    let alice_dim = 1usize << task.alice_qubits.len();
    if task.m() > alice_dim {
        return Err(Error::InvalidTask(format!(
            "m = {} exceeds Alice's dimension {alice_dim}",
            task.m()
        )));
    }
    Ok(construct(task))
}

/// Leading `m` Schmidt vectors on each side, completed to `m` if the rank is short.
fn schmidt_frames(task: &TeleportTask) -> (Vec<Ket>, Vec<Ket>) {
    let m = task.m();
    let schmidt = schmidt_decompose(&task.resource, &task.partition()).expect("validated task");
    let pad = |kets: Vec<Ket>, n_qubits: usize| -> Vec<Ket> {
        let seed: Vec<Vec<Complex64>> = kets.into_iter().take(m).map(Ket::into_amplitudes).collect();
        linalg::complete_basis(&seed, 1 << n_qubits)
            .into_iter()
            .take(m)
            .map(|v| Ket::from_raw(n_qubits, v))
            .collect()
    };
    let chi = pad(schmidt.left_basis, task.alice_qubits.len());
    let mu = pad(schmidt.right_basis, task.n());
    (chi, mu)
}

fn construct(task: &TeleportTask) -> MeasurementBasis {
    let m = task.m();
    let n = task.n();
    let n_alice = task.alice_qubits.len();
    let (chi, mu) = schmidt_frames(task);
    let omega = |p: usize| Complex64::from_polar(1.0, 2.0 * PI * (p % m) as f64 / m as f64);
    let inv_sqrt_m = Complex64::new(1.0 / (m as f64).sqrt(), 0.0);

    let mut vectors = Vec::with_capacity(1 << (n + n_alice));
    let mut corrections = Vec::with_capacity(m * m);
    let mut outcome_labels = Vec::with_capacity(m * m);
    for k in 0..m {
        for j in 0..m {
            let mut theta = vec![ZERO; 1 << (n + n_alice)];
            for l in 0..m {
                let term = linalg::kron_vec(task.target_basis[l].amplitudes(), chi[(l + k) % m].amplitudes());
                let w = omega(j * l) * inv_sqrt_m;
                for (t, z) in theta.iter_mut().zip(term) {
                    *t += w * z;
                }
            }
            vectors.push(Ket::from_raw(n + n_alice, theta));
            corrections.push(correction(&mu, j, k, n));
            outcome_labels.push((j, k));
        }
    }

    // Products eta_a (x) chi_b outside the active block span the rest.
    let eta_full = linalg::complete_basis(
        &task
            .target_basis
            .iter()
            .map(|k| k.amplitudes().to_vec())
            .collect::<Vec<_>>(),
        1 << n,
    );
    let chi_full = linalg::complete_basis(
        &chi.iter().map(|k| k.amplitudes().to_vec()).collect::<Vec<_>>(),
        1 << n_alice,
    );
    for (a, eta) in eta_full.iter().enumerate() {
        for (b, c) in chi_full.iter().enumerate() {
            if a < m && b < m {
                continue;
            }
            vectors.push(Ket::from_raw(n + n_alice, linalg::kron_vec(eta, c)));
        }
    }

    MeasurementBasis {
        vectors,
        active_count: m * m,
        corrections,
        outcome_labels,
        alice_basis: chi,
        bob_basis: mu,
    }
}

/// `V_(j,k) = sum_l w^(jl) |mu_l><mu_(l+k)|`, plus identity off the span of `mu`.
fn correction(mu: &[Ket], j: usize, k: usize, n: usize) -> ComplexMatrix {
    let m = mu.len();
    let dim = 1 << n;
    let mut v = ComplexMatrix::identity(dim);
    for u in mu {
        let p = ComplexMatrix::outer(u.amplitudes(), u.amplitudes());
        v = v.sub(&p).expect("same shape");
    }
    for l in 0..m {
        let w = Complex64::from_polar(1.0, 2.0 * PI * ((j * l) % m) as f64 / m as f64);
        let shift = ComplexMatrix::outer(mu[l].amplitudes(), mu[(l + k) % m].amplitudes()).scale(w);
        v = v.add(&shift).expect("same shape");
    }
    v
}

/// Checks that each active vector is maximally entangled between the input
/// span and Alice's Schmidt span: `C_l[i][k] = sqrt(m) <theta_l | eta_i chi_k>`
/// must satisfy `C_l C_l^dagger = I`.
pub fn verify_block_unitarity(basis: &MeasurementBasis, task: &TeleportTask) -> bool {
    let m = task.m();
    let (chi, _) = schmidt_frames(task);
    let scale = Complex64::new((m as f64).sqrt(), 0.0);
    let products: Vec<Vec<Vec<Complex64>>> = task
        .target_basis
        .iter()
        .map(|eta| {
            chi.iter()
                .map(|c| linalg::kron_vec(eta.amplitudes(), c.amplitudes()))
                .collect()
        })
        .collect();
    let identity = ComplexMatrix::identity(m);
    basis.vectors.iter().take(basis.active_count).all(|theta| {
        if theta.dim() != products[0][0].len() {
            return false;
        }
        let mut c = ComplexMatrix::zeros(m, m);
        for i in 0..m {
            for k in 0..m {
                c[(i, k)] = scale * linalg::inner(theta.amplitudes(), &products[i][k]);
            }
        }
        let cc = c.matmul(&c.adjoint()).expect("square");
        cc.max_abs_diff(&identity) <= 1e-9
    })
}

/// Input coefficients: given explicitly, or drawn uniformly from the unit sphere.
#[derive(Clone, Debug)]
pub enum AlphaSource {
    Explicit(Vec<Complex64>),
    Seeded(u64),
}

impl AlphaSource {
    pub fn resolve(&self, m: usize) -> Result<Vec<Complex64>> {
        match self {
            AlphaSource::Explicit(alpha) => {
                if alpha.len() != m {
                    return Err(Error::InvalidCoefficients(format!(
                        "expected {m} coefficients, found {}",
                        alpha.len()
                    )));
                }
                let norm = linalg::norm(alpha);
                if (norm - 1.0).abs() > EPS_NORM {
                    return Err(Error::InvalidCoefficients(format!(
                        "coefficient norm is {norm}, expected 1"
                    )));
                }
                Ok(alpha.clone())
            }
            AlphaSource::Seeded(seed) => Ok(random::unit_vector(&mut random::seeded(*seed), m)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TeleportOutcome {
    pub alpha: Vec<Complex64>,
    /// Born probability of every basis vector, in basis order.
    pub outcome_probabilities: Vec<f64>,
    /// Fidelity of Bob's corrected state per outcome; `None` for outcomes
    /// that cannot occur.
    pub per_outcome_fidelity: Vec<Option<f64>>,
    /// Smallest fidelity over outcomes that occur.
    pub min_fidelity: f64,
    pub cbits_required: f64,
}

/// Runs the exact protocol for a feasible task.
pub fn simulate_teleportation(task: &TeleportTask, alpha: &AlphaSource) -> Result<TeleportOutcome> {
    let alpha = alpha.resolve(task.m())?;
    let basis = build_measurement_basis(task)?;
    simulate_with_basis(task, &basis, &alpha)
}

/// Runs the protocol with a given measurement. Outcomes without a
/// correction (outside the active block) are left uncorrected.
pub fn simulate_with_basis(
    task: &TeleportTask,
    basis: &MeasurementBasis,
    alpha: &[Complex64],
) -> Result<TeleportOutcome> {
    let m = task.m();
    let n = task.n();
    if alpha.len() != m {
        return Err(Error::InvalidCoefficients(format!(
            "expected {m} coefficients, found {}",
            alpha.len()
        )));
    }

    let mut input = vec![ZERO; 1 << n];
    for (a, eta) in alpha.iter().zip(&task.target_basis) {
        for (x, &e) in input.iter_mut().zip(eta.amplitudes()) {
            *x += a * e;
        }
    }
    let order: Vec<usize> = task.alice_qubits.iter().chain(&task.bob_qubits).copied().collect();
    let resource = task.resource.reorder(&order)?;
    // rows: input (x) Alice, columns: Bob
    let joint = linalg::kron_vec(&input, resource.amplitudes());
    let bob_dim = 1usize << n;

    let mut target = vec![ZERO; bob_dim];
    for (a, mu) in alpha.iter().zip(&basis.bob_basis) {
        for (t, &z) in target.iter_mut().zip(mu.amplitudes()) {
            *t += a * z;
        }
    }
    let target_norm = linalg::norm(&target);

    let mut probabilities = Vec::with_capacity(basis.vectors.len());
    let mut fidelities = Vec::with_capacity(basis.vectors.len());
    for (idx, theta) in basis.vectors.iter().enumerate() {
        let bob: Vec<Complex64> = (0..bob_dim)
            .map(|b| {
                theta
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .map(|(r, t)| t.conj() * joint[r * bob_dim + b])
                    .sum()
            })
            .collect();
        let p = linalg::norm(&bob).powi(2);
        probabilities.push(p);
        if p <= NEGLIGIBLE_PROBABILITY {
            fidelities.push(None);
            continue;
        }
        let corrected = match basis.corrections.get(idx) {
            Some(v) if idx < basis.active_count => v.apply(&bob)?,
            _ => bob,
        };
        let overlap = linalg::inner(&target, &corrected).norm();
        fidelities.push(Some(overlap * overlap / (p * target_norm * target_norm)));
    }

    let min_fidelity = fidelities.iter().flatten().copied().fold(f64::INFINITY, f64::min);
    Ok(TeleportOutcome {
        alpha: alpha.to_vec(),
        outcome_probabilities: probabilities,
        per_outcome_fidelity: fidelities,
        min_fidelity,
        cbits_required: (basis.active_count as f64).log2(),
    })
}

/// The unitary on Bob's qubits taking `mu_l` to `eta_l` for `l < m`, which
/// turns the teleported state into the input itself.
pub fn alignment_unitary(basis: &MeasurementBasis, task: &TeleportTask) -> ComplexMatrix {
    let dim = 1usize << task.n();
    let mu = linalg::complete_basis(
        &basis
            .bob_basis
            .iter()
            .map(|k| k.amplitudes().to_vec())
            .collect::<Vec<_>>(),
        dim,
    );
    let eta = linalg::complete_basis(
        &task
            .target_basis
            .iter()
            .map(|k| k.amplitudes().to_vec())
            .collect::<Vec<_>>(),
        dim,
    );
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (e, f) in eta.iter().zip(&mu) {
        u = u.add(&ComplexMatrix::outer(e, f)).expect("same shape");
    }
    u
}
