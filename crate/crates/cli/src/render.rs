//! Plain-text reports. Numbers carry four decimals.

use std::fmt::Write;

use qcomm_core::catalog::CatalogEntry;
use qcomm_core::densecoding::SdcReport;
use qcomm_core::entropy::EntropyTable;
use qcomm_core::qkd::{CorrelationReport, QkdRun, QkdVerdict, SplitAssessment};
use qcomm_core::teleport::{FeasibilityVerdict, MeasurementBasis, TeleportOutcome};
use qcomm_core::{format_ket, SchmidtForm};

use crate::suite::SuiteCheck;

const KET_THRESHOLD: f64 = 1e-9;

fn labels(l: &[usize]) -> String {
    l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "n/a".into()
    } else {
        format!("{x:.4}")
    }
}

pub fn state_list(entries: &[CatalogEntry]) -> String {
    let mut out = format!("{:<8} {:>6}  definition\n", "name", "qubits");
    for e in entries {
        let _ = writeln!(out, "{:<8} {:>6}  {}", e.name, e.state.n_qubits(), e.source);
    }
    out
}

pub fn state_show(entry: &CatalogEntry) -> String {
    format!(
        "{} ({} qubits)\ndefinition: {}\namplitudes: {}\n",
        entry.name,
        entry.state.n_qubits(),
        entry.source,
        format_ket(&entry.state, KET_THRESHOLD)
    )
}

pub fn entropy(label: &str, table: &EntropyTable) -> String {
    let mut out = format!("{label} ({} qubits)\n", table.n_qubits);
    let _ = writeln!(out, "{:<10} {:<10} {:>8}", "side A", "side B", "S (bits)");
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{:<10} {:<10} {:>8}",
            labels(&row.side_a),
            labels(&row.side_b),
            num(row.entropy_bits)
        );
    }
    out
}

pub fn schmidt(label: &str, form: &SchmidtForm) -> String {
    let p = &form.partition;
    let mut out = format!(
        "{label}, cut {} | {}: rank {}, entropy {} bits\n",
        labels(p.side_a()),
        labels(p.side_b()),
        form.rank(),
        num(form.entropy_bits())
    );
    for ((c, left), right) in form.coefficients.iter().zip(&form.left_basis).zip(&form.right_basis) {
        let _ = writeln!(
            out,
            "{}  [{}]  [{}]",
            num(*c),
            format_ket(left, KET_THRESHOLD),
            format_ket(right, KET_THRESHOLD)
        );
    }
    out
}

fn verdict_line(v: &FeasibilityVerdict) -> String {
    format!(
        "{}, S={}, need {}",
        if v.feasible { "feasible" } else { "infeasible" },
        num(v.bob_entropy_bits),
        num(v.required_entropy_bits)
    )
}

pub fn feasibility(v: &FeasibilityVerdict) -> String {
    let spectrum: Vec<String> = v.schmidt_spectrum.iter().map(|c| num(*c)).collect();
    format!(
        "{}\nschmidt spectrum: {}\nequal spectrum of rank {}: {}\n",
        verdict_line(v),
        spectrum.join(" "),
        v.m,
        if v.structural_ok { "yes" } else { "no" }
    )
}

fn complex(z: &num_complex::Complex64) -> String {
    format!(
        "{}{}{}i",
        num(z.re),
        if z.im < 0.0 { "-" } else { "+" },
        num(z.im.abs())
    )
}

pub fn teleport_run(v: &FeasibilityVerdict, basis: &MeasurementBasis, outcome: &TeleportOutcome) -> String {
    let mut out = verdict_line(v);
    if !v.feasible {
        out.push_str(" (no exact protocol; running the closest construction)");
    }
    out.push('\n');
    let alpha: Vec<String> = outcome.alpha.iter().map(complex).collect();
    let _ = writeln!(out, "input: {}", alpha.join(", "));
    let _ = writeln!(out, "classical bits: {}", num(outcome.cbits_required));
    let _ = writeln!(out, "minimum fidelity: {}", num(outcome.min_fidelity));
    let _ = writeln!(
        out,
        "{:>7} {:>8} {:>12} {:>9}",
        "outcome", "(j,k)", "probability", "fidelity"
    );
    for (i, (p, f)) in outcome
        .outcome_probabilities
        .iter()
        .zip(&outcome.per_outcome_fidelity)
        .enumerate()
    {
        let jk = match basis.outcome_labels.get(i) {
            Some((j, k)) if i < basis.active_count => format!("({j},{k})"),
            _ => "-".into(),
        };
        let f = f.map(num).unwrap_or_else(|| "-".into());
        let _ = writeln!(out, "{i:>7} {jk:>8} {:>12} {f:>9}", num(*p));
    }
    out
}

pub fn sdc(label: &str, r: &SdcReport) -> String {
    let witness: Vec<String> = r.witness.iter().map(|w| w.to_string()).collect();
    format!(
        "{label}, sender {} (entropy {} bits)\northogonal encodings: {} of {}\ncapacity: {} cbits\nwitness: {}\n",
        labels(&r.sender_qubits),
        num(r.sender_entropy_bits),
        r.k_orthogonal,
        r.encodings.len(),
        num(r.capacity_cbits),
        witness.join(" ")
    )
}

fn correlation(out: &mut String, r: &CorrelationReport) {
    let family = r.alice_basis.family;
    let names = family.outcome_names();
    let enc_a = r.alice_basis.encoding_names();
    let enc_b = r.bob_basis.encoding_names();
    let _ = writeln!(
        out,
        "  {:?} basis, Alice bits 0/1 = {}/{}, Bob bits 0/1 = {}/{}",
        family, enc_a[0], enc_a[1], enc_b[0], enc_b[1]
    );
    let _ = write!(out, "    {:>6}", "A\\B");
    for n in names {
        let _ = write!(out, " {n:>6}");
    }
    out.push('\n');
    for (a, row) in r.joint.iter().enumerate() {
        let _ = write!(out, "    {:>6}", names[a]);
        for p in row {
            let _ = write!(out, " {:>6}", num(*p));
        }
        out.push('\n');
    }
    let _ = writeln!(
        out,
        "    encoded mass {}, agreement {}, perfectly correlated: {}",
        num(r.encoded_mass),
        num(r.agreement_rate),
        if r.perfectly_correlated { "yes" } else { "no" }
    );
}

fn split(out: &mut String, s: &SplitAssessment) {
    let _ = writeln!(
        out,
        "split {} | {}: {}",
        labels(&s.alice),
        labels(&s.bob),
        if s.suitable { "suitable" } else { "unsuitable" }
    );
    for r in &s.families {
        correlation(out, r);
    }
}

pub fn qkd_check(label: &str, v: &QkdVerdict) -> String {
    let mut out = format!("{label}\n");
    for s in &v.splits {
        split(&mut out, s);
    }
    match v.witness {
        Some(i) => {
            let s = &v.splits[i];
            let _ = writeln!(
                out,
                "verdict: suitable (split {} | {})",
                labels(&s.alice),
                labels(&s.bob)
            );
        }
        None => out.push_str("verdict: unsuitable\n"),
    }
    out
}

pub fn qkd_run(label: &str, s: &SplitAssessment, run: &QkdRun, sift: f64, agreement: f64) -> String {
    const PREVIEW: usize = 64;
    let preview = |k: &str| {
        if k.len() > PREVIEW {
            format!("{}...", &k[..PREVIEW])
        } else {
            k.to_string()
        }
    };
    let mut out = format!(
        "{label}, split {} | {} ({})\n",
        labels(&s.alice),
        labels(&s.bob),
        if s.suitable { "suitable" } else { "unsuitable" }
    );
    let _ = writeln!(out, "rounds {}, seed {}, sifted {}", run.rounds, run.seed, run.sifted);
    let _ = writeln!(out, "sift rate {} (expected {})", num(run.sift_rate), num(sift));
    let _ = writeln!(
        out,
        "agreement {} (expected {})",
        num(run.agreement_rate),
        num(agreement)
    );
    let _ = writeln!(out, "alice key: {}", preview(&run.alice_key));
    let _ = writeln!(out, "bob key:   {}", preview(&run.bob_key));
    out
}

pub fn suite(checks: &[SuiteCheck]) -> String {
    let mut out = String::new();
    for c in checks {
        let _ = writeln!(
            out,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.group,
            c.name
        );
        if !c.passed {
            let _ = writeln!(out, "     {}", c.detail);
        }
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", checks.len(), failed);
    out
}
