//! Acceptance battery. Prints one PASS/FAIL line per criterion, with a
//! detail line for every failed check, and exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use qcomm_core::catalog::{catalog_state, four_qubit_resources};
use qcomm_core::densecoding::{enumerate_encodings, max_orthogonal_set, sdc_report};
use qcomm_core::entropy::{entropy_table, partial_trace, schmidt_decompose, von_neumann_entropy, Bipartition};
use qcomm_core::ket::complement;
use qcomm_core::ket_io::{format_ket, parse_ket};
use qcomm_core::linalg::EPS_ORTHO;
use qcomm_core::qkd::{correlation_check, expected_rates, qkd_verdict, simulate_qkd, MeasBasis, QkdScheme};
use qcomm_core::random::{random_ket, random_unitary, seeded};
use qcomm_core::teleport::{
    build_measurement_basis, check_feasibility, simulate_teleportation, verify_block_unitarity, AlphaSource,
    TeleportTask,
};
use qcomm_core::Ket;
use rand::seq::index::sample;

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    count: usize,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn entropy(state: &Ket, keep: &[usize]) -> f64 {
    von_neumann_entropy(&partial_trace(state, keep).unwrap()).unwrap()
}

fn feasible(name: &str, bob: &[usize], m: usize) -> bool {
    let task = TeleportTask::new(catalog_state(name).unwrap(), bob, m).unwrap();
    check_feasibility(&task).unwrap().feasible
}

fn k_orthogonal(name: &str, sender: &[usize]) -> usize {
    sdc_report(&catalog_state(name).unwrap(), sender).unwrap().k_orthogonal
}

fn pairs() -> Vec<Vec<usize>> {
    (1..=4).flat_map(|a| (a + 1..=4).map(move |b| vec![a, b])).collect()
}

fn criterion_1(c: &mut Checks) {
    for (name, row) in common::TABLE_I {
        let table = entropy_table(&catalog_state(name).unwrap()).unwrap();
        for (cols, expected) in common::TABLE_I_COLUMNS.iter().zip(row) {
            let got = table.get(cols).unwrap();
            c.check((got - expected).abs() <= 5e-3, || {
                format!("{name} S{cols:?} = {got}, table {expected}")
            });
        }
    }
    let w4 = catalog_state("W4").unwrap();
    let s1 = catalog_state("S1").unwrap();
    let exact: [(&Ket, &[usize], f64, f64, &str); 3] = [
        (&w4, &[1], 0.811278, 1e-6, "W4 S(1)"),
        (&s1, &[1, 2], 1.5, 1e-9, "S1 S(12)"),
        (&s1, &[1, 3], 1.216917, 1e-6, "S1 S(13)"),
    ];
    for (state, keep, expected, tol, label) in exact {
        let ours = entropy(state, keep);
        let oracle = common::oracle_entropy(state, keep);
        c.check((ours - oracle).abs() <= 1e-9, || {
            format!("{label}: library {ours} vs oracle {oracle}")
        });
        c.check((oracle - expected).abs() <= tol, || {
            format!("{label}: oracle {oracle:.12} vs required {expected} +- {tol:e}")
        });
    }
}

fn criterion_2_cases() -> Vec<(&'static str, Vec<usize>, usize, bool)> {
    let mut cases = Vec::new();
    for q in 1..=4 {
        cases.push(("GHZ4", vec![q], 2, true));
        cases.push(("W4", vec![q], 2, false));
        cases.push(("S1", vec![q], 2, q == 2));
        cases.push(("S2", vec![q], 2, q != 1));
        cases.push(("OMEGA", vec![q], 2, true));
    }
    for pair in pairs() {
        let class_ok = !matches!(pair.as_slice(), [2, 3] | [1, 4]);
        cases.push(("OMEGA", pair.clone(), 4, class_ok));
        cases.push(("GHZ4", pair, 4, false));
    }
    cases
}

fn criterion_2(c: &mut Checks) {
    for (name, bob, m, expected) in criterion_2_cases() {
        let got = feasible(name, &bob, m);
        c.check(got == expected, || {
            format!("{name} bob {bob:?} m={m}: feasible={got}, expected {expected}")
        });
    }
}

fn criterion_3(c: &mut Checks) {
    for (name, bob, m, expected) in criterion_2_cases() {
        if !expected {
            continue;
        }
        let task = TeleportTask::new(catalog_state(name).unwrap(), &bob, m).unwrap();
        let basis = build_measurement_basis(&task).unwrap();
        c.check(verify_block_unitarity(&basis, &task), || {
            format!("{name} {bob:?}: block not unitary")
        });
        let p = 1.0 / (m * m) as f64;
        for seed in 0..20 {
            let out = simulate_teleportation(&task, &AlphaSource::Seeded(seed)).unwrap();
            c.check(out.min_fidelity >= 1.0 - 1e-9, || {
                format!("{name} {bob:?} seed {seed}: fidelity {}", out.min_fidelity)
            });
            let uniform = out.outcome_probabilities[..m * m].iter().all(|q| (q - p).abs() <= 1e-9);
            c.check(uniform, || {
                format!("{name} {bob:?} seed {seed}: active outcomes not 1/m^2")
            });
        }
    }
}

fn criterion_4(c: &mut Checks) {
    let mut expect = |name: &str, sender: &[usize], cbits: f64| {
        let got = sdc_report(&catalog_state(name).unwrap(), sender)
            .unwrap()
            .capacity_cbits;
        c.check(got == cbits, || {
            format!("{name} sender {sender:?}: {got} cbits, expected {cbits}")
        });
    };
    for q in 1..=4 {
        expect("GHZ4", &[q], 2.0);
        expect("OMEGA", &[q], 2.0);
    }
    expect("GHZ4", &[1, 2], 3.0);
    expect("GHZ4", &[1, 2, 3], 4.0);
    expect("OMEGA", &[1, 2], 4.0);
    expect("OMEGA", &[1, 3], 4.0);
    expect("OMEGA", &[1, 4], 3.0);
    expect("W4", &[1, 2], 3.0);
    expect("S1", &[2], 2.0);
    expect("S1", &[1, 2], 3.0);
    expect("S1", &[1, 3], 2.0);
    expect("S1", &[1, 4], 2.0);
    expect("S1", &[1, 3, 4], 4.0);
    for q in [1, 3, 4] {
        let k = k_orthogonal("S1", &[q]);
        c.check(k < 4, || format!("S1 sender {{{q}}}: {k} orthogonal states"));
    }
    let s2 = catalog_state("S2").unwrap();
    for pair in pairs() {
        let r = sdc_report(&s2, &pair).unwrap();
        if (r.sender_entropy_bits - 1.5).abs() < 1e-9 {
            c.check(r.capacity_cbits == 3.0, || {
                format!("S2 sender {pair:?}: {} cbits", r.capacity_cbits)
            });
        }
    }

    let mut rng = seeded(2024);
    for entry in four_qubit_resources() {
        for sender in [vec![1, 2], vec![1, 3], vec![1, 4], vec![1, 2, 3]] {
            let encodings: Vec<Ket> = enumerate_encodings(&entry.state, &sender)
                .unwrap()
                .into_iter()
                .map(|(_, k)| k)
                .collect();
            for _ in 0..3 {
                let mut idx = sample(&mut rng, encodings.len(), 12).into_vec();
                idx.sort_unstable();
                let sub: Vec<Ket> = idx.iter().map(|&i| encodings[i].clone()).collect();
                let fast = max_orthogonal_set(&sub).unwrap();
                let slow = common::brute_force_clique(sub.len(), |i, j| sub[i].inner(&sub[j]).norm() <= EPS_ORTHO);
                c.check(fast == slow, || {
                    format!("{} {sender:?}: clique {fast:?} vs brute force {slow:?}", entry.name)
                });
            }
        }
    }
}

fn criterion_5(c: &mut Checks) {
    let r = sdc_report(&catalog_state("S1").unwrap(), &[1, 2]).unwrap();
    c.check(r.capacity_cbits == 3.0, || {
        format!("S1 sender (1,2): {} cbits", r.capacity_cbits)
    });
    for m in [2, 4] {
        let ok = feasible("S1", &[3, 4], m);
        c.check(!ok, || format!("S1 bob (3,4) m={m} reported feasible"));
    }
}

fn criterion_6(c: &mut Checks) {
    let families = [MeasBasis::computational(), MeasBasis::bell()];
    let ghz = catalog_state("GHZ4").unwrap();
    for basis in &families {
        let r = correlation_check(&ghz, &[1, 3], &[2, 4], basis, basis).unwrap();
        c.check(r.perfectly_correlated, || {
            format!("GHZ4 {:?} not perfectly correlated", basis.family)
        });
    }
    for name in ["S1", "S2"] {
        let state = catalog_state(name).unwrap();
        let both = families.iter().all(|b| {
            correlation_check(&state, &[1, 3], &[2, 4], b, b)
                .unwrap()
                .perfectly_correlated
        });
        c.check(!both, || format!("{name} passes both matching-basis checks"));
        let verdict = qkd_verdict(&state).unwrap();
        c.check(!verdict.suitable, || format!("{name} judged suitable"));
    }

    let (sift, _) = expected_rates(&ghz, &[1, 3], &[2, 4], &QkdScheme::canonical()).unwrap();
    let run = simulate_qkd(&ghz, &[1, 3], &[2, 4], 10_000, 42).unwrap();
    c.check(run.agreement_rate == 1.0, || {
        format!("GHZ4 agreement {}", run.agreement_rate)
    });
    let sigma = (sift * (1.0 - sift) / 10_000.0).sqrt();
    c.check((run.sift_rate - sift).abs() <= 5.0 * sigma, || {
        format!("GHZ4 sift rate {} vs {sift} (sigma {sigma})", run.sift_rate)
    });

    let s1 = catalog_state("S1").unwrap();
    let (_, analytic) = expected_rates(&s1, &[1, 3], &[2, 4], &QkdScheme::canonical()).unwrap();
    let run = simulate_qkd(&s1, &[1, 3], &[2, 4], 10_000, 42).unwrap();
    c.check((run.agreement_rate - analytic).abs() <= 0.02, || {
        format!("S1 agreement {} vs analytic {analytic}", run.agreement_rate)
    });
}

fn all_cuts(n: usize) -> Vec<Vec<usize>> {
    (0..1usize << (n - 1))
        .map(|mask| {
            std::iter::once(1)
                .chain((2..=n).filter(|l| mask >> (l - 2) & 1 == 1))
                .collect::<Vec<_>>()
        })
        .filter(|s| s.len() < n)
        .collect()
}

fn criterion_7(c: &mut Checks) {
    let mut rng = seeded(77);
    for i in 0..100 {
        let state = random_ket(&mut rng, 4);
        for cut in all_cuts(4) {
            let a = entropy(&state, &cut);
            let b = entropy(&state, &complement(4, &cut));
            c.check((a - b).abs() <= 1e-9, || {
                format!("state {i} cut {cut:?}: {a} vs complement {b}")
            });
        }
        let moved = (1..=4).fold(state.clone(), |k, l| {
            k.apply_single(l, &random_unitary(&mut rng, 2)).unwrap()
        });
        let before = entropy_table(&state).unwrap();
        let after = entropy_table(&moved).unwrap();
        for (x, y) in before.rows.iter().zip(&after.rows) {
            c.check((x.entropy_bits - y.entropy_bits).abs() <= 1e-9, || {
                format!("state {i} {:?}: local unitary changed entropy", x.side_a)
            });
        }
    }
    for i in 0..100 {
        let n = 2 + i % 5;
        let state = random_ket(&mut rng, n);
        for cut in all_cuts(n) {
            let form = schmidt_decompose(&state, &Bipartition::new(n, &cut).unwrap()).unwrap();
            let err = form.reconstruct().max_abs_diff(&state);
            c.check(err <= 1e-9, || {
                format!("state {i} cut {cut:?}: reconstruction error {err:e}")
            });
        }
        let back = parse_ket(&format_ket(&state, 0.0)).unwrap();
        let err = back.max_abs_diff(&state);
        c.check(err <= 1e-9, || format!("state {i}: text round trip error {err:e}"));
    }
    for n in 3..=6 {
        let sender: Vec<usize> = (1..n).collect();
        let r = sdc_report(&catalog_state(&format!("GHZ({n})")).unwrap(), &sender).unwrap();
        c.check(r.capacity_cbits == n as f64, || {
            format!("GHZ({n}): {} cbits", r.capacity_cbits)
        });
    }
}

type Criterion = fn(&mut Checks);

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 7] = [
        ("entropy table and exact entropies", criterion_1),
        ("teleportation feasibility matrix", criterion_2),
        ("exact teleportation by simulation", criterion_3),
        ("dense coding capacities", criterion_4),
        ("dense coding without teleportation", criterion_5),
        ("key distribution correlations", criterion_6),
        ("property suites", criterion_7),
    ];
    let started = Instant::now();
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let mut checks = Checks::default();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&mut checks)));
        if let Err(panic) = outcome {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            checks.failures.push(format!("panicked: {msg}"));
        }
        let status = if checks.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {title} ({} checks)", i + 1, checks.count);
        for f in &checks.failures {
            println!("    {f}");
        }
        if !checks.failures.is_empty() {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of 7 criteria passed in {:.1?}",
        7 - failed,
        started.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
