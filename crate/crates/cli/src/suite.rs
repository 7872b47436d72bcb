//! Reference battery: published entropies, teleportation verdicts, dense
//! coding capacities and key-distribution verdicts for the catalog states.

use qcomm_core::densecoding::sdc_report;
use qcomm_core::qkd::{expected_rates, qkd_verdict, simulate_qkd, QkdScheme};
use qcomm_core::teleport::{check_feasibility, simulate_teleportation, AlphaSource, TeleportTask};
use qcomm_core::{catalog_state, entropy_table};
use serde::Serialize;
use serde_json::Value;

/// Published two-decimal entropies for S(1), S(2), S(3), S(4), S(12), S(13), S(14).
const ENTROPIES: [(&str, [f64; 7]); 5] = [
    ("GHZ4", [1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
    ("OMEGA", [1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 1.0]),
    ("W4", [0.81, 0.81, 0.81, 0.81, 1.0, 1.0, 1.0]),
    ("S1", [0.81, 1.0, 0.81, 0.81, 1.5, 1.22, 1.22]),
    ("S2", [0.81, 1.0, 1.0, 1.0, 1.5, 1.5, 1.5]),
];
const COLUMNS: [&[usize]; 7] = [&[1], &[2], &[3], &[4], &[1, 2], &[1, 3], &[1, 4]];
const ENTROPY_TOL: f64 = 5e-3;
const FIDELITY_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct SuiteCheck {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

struct Battery(Vec<SuiteCheck>);

impl Battery {
    fn record(&mut self, group: &'static str, name: String, outcome: Result<String, String>) {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.0.push(SuiteCheck {
            group,
            name,
            passed,
            detail,
        });
    }
}

fn labels(l: &[usize]) -> String {
    l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn run() -> Vec<SuiteCheck> {
    let mut b = Battery(Vec::new());
    entropies(&mut b);
    teleportation(&mut b);
    capacities(&mut b);
    key_distribution(&mut b);
    b.0
}

pub fn to_json(checks: &[SuiteCheck]) -> Value {
    serde_json::json!({
        "passed": checks.iter().all(|c| c.passed),
        "failed": checks.iter().filter(|c| !c.passed).count(),
        "checks": checks,
    })
}

fn entropies(b: &mut Battery) {
    for (name, expected) in ENTROPIES {
        let table = catalog_state(name).and_then(|s| entropy_table(&s));
        for (cols, want) in COLUMNS.iter().zip(expected) {
            let got = table.as_ref().ok().and_then(|t| t.get(cols));
            let outcome = match got {
                Some(g) if (g - want).abs() <= ENTROPY_TOL => Ok(format!("{g:.4}")),
                Some(g) => Err(format!("got {g:.6}, published {want}")),
                None => Err("entropy unavailable".into()),
            };
            b.record(
                "entropy",
                format!("{name} S({})", labels(cols).replace(',', "")),
                outcome,
            );
        }
    }
}

/// (state, Bob's qubits, m, expected feasibility)
fn teleport_cases() -> Vec<(&'static str, Vec<usize>, usize, bool)> {
    let mut cases = Vec::new();
    for q in 1..=4 {
        cases.push(("GHZ4", vec![q], 2, true));
        cases.push(("OMEGA", vec![q], 2, true));
        cases.push(("W4", vec![q], 2, false));
        cases.push(("S1", vec![q], 2, q == 2));
        cases.push(("S2", vec![q], 2, q != 1));
    }
    for a in 1..=4 {
        for c in a + 1..=4 {
            let omega_ok = !matches!((a, c), (2, 3) | (1, 4));
            cases.push(("OMEGA", vec![a, c], 4, omega_ok));
            cases.push(("GHZ4", vec![a, c], 4, false));
        }
    }
    cases.push(("S1", vec![3, 4], 2, false));
    cases.push(("S1", vec![3, 4], 4, false));
    cases
}

fn teleportation(b: &mut Battery) {
    for (name, bob, m, expected) in teleport_cases() {
        let outcome = (|| {
            let task = TeleportTask::new(catalog_state(name)?, &bob, m)?;
            let verdict = check_feasibility(&task)?;
            if verdict.feasible != expected {
                return Ok(Err(format!("feasible = {}, expected {expected}", verdict.feasible)));
            }
            if !expected {
                return Ok(Ok("infeasible".to_string()));
            }
            let mut worst = f64::INFINITY;
            for seed in 0..5 {
                worst = worst.min(simulate_teleportation(&task, &AlphaSource::Seeded(seed))?.min_fidelity);
            }
            Ok(if worst >= 1.0 - FIDELITY_TOL {
                Ok(format!("exact, fidelity {worst:.12}"))
            } else {
                Err(format!("feasible but fidelity {worst}"))
            })
        })()
        .unwrap_or_else(|e: qcomm_core::Error| Err(e.to_string()));
        b.record(
            "teleport",
            format!("{name} to qubits {} with m={m}", labels(&bob)),
            outcome,
        );
    }
}

fn capacities(b: &mut Battery) {
    let mut cases: Vec<(&str, Vec<usize>, f64)> = Vec::new();
    for q in 1..=4 {
        cases.push(("GHZ4", vec![q], 2.0));
        cases.push(("OMEGA", vec![q], 2.0));
    }
    cases.extend([
        ("GHZ4", vec![1, 2], 3.0),
        ("GHZ4", vec![1, 2, 3], 4.0),
        ("OMEGA", vec![1, 2], 4.0),
        ("OMEGA", vec![1, 3], 4.0),
        ("OMEGA", vec![1, 4], 3.0),
        ("W4", vec![1, 2], 3.0),
        ("S1", vec![2], 2.0),
        ("S1", vec![1, 2], 3.0),
        ("S1", vec![1, 3], 2.0),
        ("S1", vec![1, 4], 2.0),
        ("S1", vec![1, 3, 4], 4.0),
    ]);
    for (name, sender, want) in cases {
        let outcome = match catalog_state(name).and_then(|s| sdc_report(&s, &sender)) {
            Ok(r) if r.capacity_cbits == want => Ok(format!("{} orthogonal encodings", r.k_orthogonal)),
            Ok(r) => Err(format!("{} cbits, expected {want}", r.capacity_cbits)),
            Err(e) => Err(e.to_string()),
        };
        b.record("dense coding", format!("{name} sender {}", labels(&sender)), outcome);
    }
}

fn key_distribution(b: &mut Battery) {
    for (name, expected) in [
        ("GHZ4", true),
        ("OMEGA", true),
        ("W4", true),
        ("S1", false),
        ("S2", false),
    ] {
        let outcome = match catalog_state(name).and_then(|s| qkd_verdict(&s)) {
            Ok(v) if v.suitable == expected => Ok(match v.witness {
                Some(i) => format!(
                    "suitable via {} | {}",
                    labels(&v.splits[i].alice),
                    labels(&v.splits[i].bob)
                ),
                None => "unsuitable".into(),
            }),
            Ok(v) => Err(format!("suitable = {}, expected {expected}", v.suitable)),
            Err(e) => Err(e.to_string()),
        };
        b.record("key distribution", format!("{name} verdict"), outcome);
    }

    let outcome = (|| {
        let ghz = catalog_state("GHZ4")?;
        let run = simulate_qkd(&ghz, &[1, 3], &[2, 4], 1000, 42)?;
        let (sift, _) = expected_rates(&ghz, &[1, 3], &[2, 4], &QkdScheme::canonical())?;
        Ok(if run.agreement_rate == 1.0 {
            Ok(format!("sift rate {:.4} (expected {sift:.4})", run.sift_rate))
        } else {
            Err(format!("agreement {}", run.agreement_rate))
        })
    })()
    .unwrap_or_else(|e: qcomm_core::Error| Err(e.to_string()));
    b.record(
        "key distribution",
        "GHZ4 1,3 | 2,4 keys agree over 1000 rounds".into(),
        outcome,
    );
}
