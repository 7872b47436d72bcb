//! Two-basis key distribution over a four-qubit resource split 2|2.
//!
//! Each round Alice measures her pair in the computational or the Bell
//! basis, then Bob does the same on his. Rounds are kept when both picked
//! the same family and both outcomes carry a bit.
//!
//! Randomness comes from [`random::seeded`] with exactly one `f64` draw per
//! decision, in the order: Alice's basis, Alice's outcome, Bob's basis,
//! Bob's outcome. A draw below 0.5 selects the computational family;
//! outcomes are sampled by inverse CDF over the outcome order.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ket::{self, Ket};
use crate::linalg::{self, ComplexMatrix, ZERO};
use crate::random;

/// Tolerance for "equal" and "zero" entries of the encoded submatrix.
pub const CORRELATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Computational,
    Bell,
}

impl Family {
    pub const BOTH: [Family; 2] = [Family::Computational, Family::Bell];

    fn vectors(self) -> Vec<Ket> {
        let r = |v: [f64; 4]| Ket::from_raw(2, v.iter().map(|&x| Complex64::new(x, 0.0)).collect());
        let s = FRAC_1_SQRT_2;
        match self {
            Family::Computational => (0..4).map(|i| Ket::basis(2, i).expect("two qubits")).collect(),
            Family::Bell => vec![
                r([s, 0.0, 0.0, s]),
                r([s, 0.0, 0.0, -s]),
                r([0.0, s, s, 0.0]),
                r([0.0, s, -s, 0.0]),
            ],
        }
    }

    pub fn outcome_names(self) -> [&'static str; 4] {
        match self {
            Family::Computational => ["00", "01", "10", "11"],
            Family::Bell => ["PHI+", "PHI-", "PSI+", "PSI-"],
        }
    }

    /// `|00>, |11>` and `PHI+, PHI-` carry bits 0 and 1.
    pub fn canonical_encoding(self) -> [usize; 2] {
        match self {
            Family::Computational => [0, 3],
            Family::Bell => [0, 1],
        }
    }
}

/// A two-qubit measurement with bits attached to two of its outcomes.
#[derive(Clone, Debug, Serialize)]
pub struct MeasBasis {
    pub family: Family,
    #[serde(skip)]
    vectors: Vec<Ket>,
    /// Outcome index carrying bit 0, then bit 1.
    encoding: [usize; 2],
}

impl MeasBasis {
    pub fn new(family: Family, encoding: [usize; 2]) -> Result<Self> {
        if encoding[0] == encoding[1] || encoding.iter().any(|&e| e >= 4) {
            return Err(Error::InvalidLabels(format!(
                "encoding {encoding:?} must name two distinct outcomes in 0..4"
            )));
        }
        Ok(Self {
            family,
            vectors: family.vectors(),
            encoding,
        })
    }

    pub fn canonical(family: Family) -> Self {
        Self::new(family, family.canonical_encoding()).expect("valid encoding")
    }

    pub fn computational() -> Self {
        Self::canonical(Family::Computational)
    }

    pub fn bell() -> Self {
        Self::canonical(Family::Bell)
    }

    pub fn vectors(&self) -> &[Ket] {
        &self.vectors
    }

    pub fn encoding(&self) -> [usize; 2] {
        self.encoding
    }

    pub fn bit(&self, outcome: usize) -> Option<u8> {
        self.encoding.iter().position(|&e| e == outcome).map(|b| b as u8)
    }

    /// Encoded outcomes by name, bit 0 first.
    pub fn encoding_names(&self) -> [&'static str; 2] {
        let names = self.family.outcome_names();
        [names[self.encoding[0]], names[self.encoding[1]]]
    }
}

/// Bases used by each party for each family.
#[derive(Clone, Debug, Serialize)]
pub struct QkdScheme {
    pub computational: (MeasBasis, MeasBasis),
    pub bell: (MeasBasis, MeasBasis),
}

impl QkdScheme {
    pub fn canonical() -> Self {
        Self {
            computational: (MeasBasis::computational(), MeasBasis::computational()),
            bell: (MeasBasis::bell(), MeasBasis::bell()),
        }
    }

    pub fn pair(&self, family: Family) -> &(MeasBasis, MeasBasis) {
        match family {
            Family::Computational => &self.computational,
            Family::Bell => &self.bell,
        }
    }
}

fn check_split(state: &Ket, alice: &[usize], bob: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    if state.n_qubits() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: state.n_qubits(),
        });
    }
    let a = ket::check_labels(4, alice)?;
    let b = ket::check_labels(4, bob)?;
    if a.len() != 2 || b.len() != 2 || a.iter().any(|l| b.contains(l)) {
        return Err(Error::InvalidLabels(format!(
            "need two qubits each for Alice and Bob covering 1..=4, got {alice:?} and {bob:?}"
        )));
    }
    Ok((a, b))
}

/// State amplitudes as a 4x4 matrix: rows Alice's pair, columns Bob's pair.
fn split_matrix(state: &Ket, alice: &[usize], bob: &[usize]) -> Result<ComplexMatrix> {
    let (a, b) = check_split(state, alice, bob)?;
    let order: Vec<usize> = a.iter().chain(&b).copied().collect();
    let r = state.reorder(&order)?;
    ComplexMatrix::from_vec(4, 4, r.into_amplitudes())
}

/// `c(a, b) = <bell_a (x) bell_b | state>` with Bell order PHI+, PHI-, PSI+, PSI-.
pub fn bell_decomposition(state: &Ket, alice: &[usize], bob: &[usize]) -> Result<ComplexMatrix> {
    let m = split_matrix(state, alice, bob)?;
    Ok(project(&m, &Family::Bell.vectors(), &Family::Bell.vectors()))
}

/// `out[a][b] = sum_(x,y) conj(va[a][x]) conj(vb[b][y]) m[x][y]`.
fn project(m: &ComplexMatrix, va: &[Ket], vb: &[Ket]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(4, 4);
    for (a, u) in va.iter().enumerate() {
        for (b, w) in vb.iter().enumerate() {
            let mut s = ZERO;
            for x in 0..4 {
                for y in 0..4 {
                    s += u.amplitudes()[x].conj() * w.amplitudes()[y].conj() * m[(x, y)];
                }
            }
            out[(a, b)] = s;
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CorrelationReport {
    pub alice_basis: MeasBasis,
    pub bob_basis: MeasBasis,
    /// `P(a, b)` over all outcome pairs.
    pub joint: [[f64; 4]; 4],
    /// `P` restricted to encoded outcomes, indexed by bit.
    pub encoded_submatrix: [[f64; 2]; 2],
    pub encoded_mass: f64,
    pub perfectly_correlated: bool,
    /// Probability the bits agree given both outcomes are encoded; NaN if
    /// that never happens.
    pub agreement_rate: f64,
}

pub fn correlation_check(
    state: &Ket,
    alice: &[usize],
    bob: &[usize],
    basis_a: &MeasBasis,
    basis_b: &MeasBasis,
) -> Result<CorrelationReport> {
    let m = split_matrix(state, alice, bob)?;
    let amps = project(&m, basis_a.vectors(), basis_b.vectors());
    let mut joint = [[0.0; 4]; 4];
    for (a, row) in joint.iter_mut().enumerate() {
        for (b, p) in row.iter_mut().enumerate() {
            *p = amps[(a, b)].norm_sqr();
        }
    }
    let mut sub = [[0.0; 2]; 2];
    for (i, &a) in basis_a.encoding.iter().enumerate() {
        for (j, &b) in basis_b.encoding.iter().enumerate() {
            sub[i][j] = joint[a][b];
        }
    }
    let mass: f64 = sub.iter().flatten().sum();
    let perfectly_correlated = mass > CORRELATION_TOL
        && sub[0][1] <= CORRELATION_TOL
        && sub[1][0] <= CORRELATION_TOL
        && (sub[0][0] - sub[1][1]).abs() <= CORRELATION_TOL;
    let agreement_rate = if mass > 0.0 {
        (sub[0][0] + sub[1][1]) / mass
    } else {
        f64::NAN
    };
    Ok(CorrelationReport {
        alice_basis: basis_a.clone(),
        bob_basis: basis_b.clone(),
        joint,
        encoded_submatrix: sub,
        encoded_mass: mass,
        perfectly_correlated,
        agreement_rate,
    })
}

/// The three ways to split four qubits two and two, Alice holding qubit 1.
pub const BALANCED_SPLITS: [([usize; 2], [usize; 2]); 3] = [([1, 2], [3, 4]), ([1, 3], [2, 4]), ([1, 4], [2, 3])];

#[derive(Clone, Debug, Serialize)]
pub struct SplitAssessment {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
    /// Computational then Bell; each the first passing encoding tried, or
    /// the canonical one if none passes.
    pub families: Vec<CorrelationReport>,
    pub suitable: bool,
}

impl SplitAssessment {
    /// The bases found for this split, usable with [`simulate_qkd_with`].
    pub fn scheme(&self) -> QkdScheme {
        let pair = |r: &CorrelationReport| (r.alice_basis.clone(), r.bob_basis.clone());
        QkdScheme {
            computational: pair(&self.families[0]),
            bell: pair(&self.families[1]),
        }
    }
}

/// Two most likely outcomes of one party's marginal (ties to the lower
/// index), ascending.
fn top_two(marginal: [f64; 4]) -> [usize; 2] {
    let mut idx = [0, 1, 2, 3];
    idx.sort_by_key(|&i| (-(marginal[i] * 1e9).round() as i64, i));
    let mut two = [idx[0], idx[1]];
    two.sort_unstable();
    two
}

/// Looks for encodings under which both matching-family checks are
/// perfectly correlated. Per family the candidates are the canonical
/// encoding, then each party's two most likely outcomes (Bob's pair in
/// either order).
pub fn assess_split(state: &Ket, alice: &[usize], bob: &[usize]) -> Result<SplitAssessment> {
    let (a, b) = check_split(state, alice, bob)?;
    let mut families = Vec::with_capacity(2);
    for family in Family::BOTH {
        let canonical = MeasBasis::canonical(family);
        let base = correlation_check(state, &a, &b, &canonical, &canonical)?;
        let mut chosen = None;
        if base.perfectly_correlated {
            chosen = Some(base.clone());
        } else {
            let row = |i: usize| base.joint[i].iter().sum::<f64>();
            let col = |j: usize| base.joint.iter().map(|r| r[j]).sum::<f64>();
            let ea = top_two([row(0), row(1), row(2), row(3)]);
            let eb = top_two([col(0), col(1), col(2), col(3)]);
            for eb in [eb, [eb[1], eb[0]]] {
                let ra = MeasBasis::new(family, ea)?;
                let rb = MeasBasis::new(family, eb)?;
                let report = correlation_check(state, &a, &b, &ra, &rb)?;
                if report.perfectly_correlated {
                    chosen = Some(report);
                    break;
                }
            }
        }
        families.push(chosen.unwrap_or(base));
    }
    let suitable = families.iter().all(|r| r.perfectly_correlated);
    Ok(SplitAssessment {
        alice: a,
        bob: b,
        families,
        suitable,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct QkdVerdict {
    pub suitable: bool,
    /// Index into `splits` of the first suitable split.
    pub witness: Option<usize>,
    pub splits: Vec<SplitAssessment>,
}

/// Suitable when some balanced split admits perfectly correlated keys in
/// both families.
pub fn qkd_verdict(state: &Ket) -> Result<QkdVerdict> {
    let splits = BALANCED_SPLITS
        .iter()
        .map(|(a, b)| assess_split(state, a, b))
        .collect::<Result<Vec<_>>>()?;
    let witness = splits.iter().position(|s| s.suitable);
    Ok(QkdVerdict {
        suitable: witness.is_some(),
        witness,
        splits,
    })
}

/// Sift rate and agreement rate implied by the joint distributions.
pub fn expected_rates(state: &Ket, alice: &[usize], bob: &[usize], scheme: &QkdScheme) -> Result<(f64, f64)> {
    let mut mass = 0.0;
    let mut agree = 0.0;
    for family in Family::BOTH {
        let (ba, bb) = scheme.pair(family);
        let r = correlation_check(state, alice, bob, ba, bb)?;
        mass += r.encoded_mass;
        agree += r.encoded_submatrix[0][0] + r.encoded_submatrix[1][1];
    }
    let agreement = if mass > 0.0 { agree / mass } else { f64::NAN };
    Ok((0.25 * mass, agreement))
}

#[derive(Clone, Debug, Serialize)]
pub struct QkdRun {
    pub rounds: usize,
    pub seed: u64,
    pub sifted: usize,
    pub sift_rate: f64,
    /// Fraction of equal bits among sifted rounds; NaN if none were sifted.
    pub agreement_rate: f64,
    pub alice_key: String,
    pub bob_key: String,
}

/// Runs the scheme with the canonical encodings.
pub fn simulate_qkd(state: &Ket, alice: &[usize], bob: &[usize], rounds: usize, seed: u64) -> Result<QkdRun> {
    simulate_qkd_with(state, alice, bob, &QkdScheme::canonical(), rounds, seed)
}

pub fn simulate_qkd_with(
    state: &Ket,
    alice: &[usize],
    bob: &[usize],
    scheme: &QkdScheme,
    rounds: usize,
    seed: u64,
) -> Result<QkdRun> {
    if rounds == 0 {
        return Err(Error::InvalidArgument("rounds must be at least 1".into()));
    }
    let m = split_matrix(state, alice, bob)?;
    let mut rng = random::seeded(seed);
    let mut alice_key = String::new();
    let mut bob_key = String::new();

    for _ in 0..rounds {
        let fa = pick_family(&mut rng);
        let basis_a = &scheme.pair(fa).0;
        // Bob's unnormalized conditional state for each of Alice's outcomes
        let conditionals: Vec<Vec<Complex64>> = basis_a
            .vectors()
            .iter()
            .map(|u| {
                (0..4)
                    .map(|y| (0..4).map(|x| u.amplitudes()[x].conj() * m[(x, y)]).sum())
                    .collect()
            })
            .collect();
        let pa: Vec<f64> = conditionals.iter().map(|c| linalg::norm(c).powi(2)).collect();
        let oa = sample(&mut rng, &pa);
        let len = pa[oa].sqrt();
        let bob_state: Vec<Complex64> = conditionals[oa].iter().map(|z| z / len).collect();

        let fb = pick_family(&mut rng);
        let basis_b = &scheme.pair(fb).1;
        let pb: Vec<f64> = basis_b
            .vectors()
            .iter()
            .map(|w| linalg::inner(w.amplitudes(), &bob_state).norm_sqr())
            .collect();
        let ob = sample(&mut rng, &pb);

        if fa != fb {
            continue;
        }
        if let (Some(x), Some(y)) = (basis_a.bit(oa), basis_b.bit(ob)) {
            alice_key.push(char::from(b'0' + x));
            bob_key.push(char::from(b'0' + y));
        }
    }

    let sifted = alice_key.len();
    let agreements = alice_key.bytes().zip(bob_key.bytes()).filter(|(x, y)| x == y).count();
    Ok(QkdRun {
        rounds,
        seed,
        sifted,
        sift_rate: sifted as f64 / rounds as f64,
        agreement_rate: if sifted > 0 {
            agreements as f64 / sifted as f64
        } else {
            f64::NAN
        },
        alice_key,
        bob_key,
    })
}

fn pick_family<R: Rng>(rng: &mut R) -> Family {
    if rng.random::<f64>() < 0.5 {
        Family::Computational
    } else {
        Family::Bell
    }
}

/// Inverse-CDF draw; outcomes of zero probability are never returned.
fn sample<R: Rng>(rng: &mut R, probabilities: &[f64]) -> usize {
    let total: f64 = probabilities.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Rebuilds the state, in `[alice, bob]` qubit order, from Bell coefficients.
pub fn from_bell_coefficients(c: &ComplexMatrix) -> Vec<Complex64> {
    let bells = Family::Bell.vectors();
    let mut out = vec![ZERO; 16];
    for a in 0..4 {
        for b in 0..4 {
            let term = linalg::kron_vec(bells[a].amplitudes(), bells[b].amplitudes());
            for (o, t) in out.iter_mut().zip(term) {
                *o += c[(a, b)] * t;
            }
        }
    }
    out
}
