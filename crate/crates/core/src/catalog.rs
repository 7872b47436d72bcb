//! Named resource states, built from exact coefficients.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ket::Ket;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub state: Ket,
    /// Defining expression in ket notation.
    pub source: String,
}

/// Fixed names, in listing order. `GHZ(n)` for `2 <= n <= 6` is also accepted.
pub const NAMES: [&str; 9] = ["GHZ4", "W4", "OMEGA", "S1", "S2", "PHI+", "PHI-", "PSI+", "PSI-"];

pub const GHZ_RANGE: std::ops::RangeInclusive<usize> = 2..=6;

/// Looks up a state by name (case-insensitive; `Ω` is accepted for OMEGA).
pub fn catalog_state(name: &str) -> Result<Ket> {
    catalog_entry(name).map(|e| e.state)
}

pub fn catalog_entry(name: &str) -> Result<CatalogEntry> {
    let key = name.trim().to_ascii_uppercase();
    let half = 0.5;
    let (canonical, terms, source): (String, Vec<(&str, f64)>, &str) = match key.as_str() {
        "GHZ4" | "GHZ" => (
            "GHZ4".into(),
            vec![("0000", FRAC_1_SQRT_2), ("1111", FRAC_1_SQRT_2)],
            "(|0000> + |1111>)/sqrt(2)",
        ),
        "W4" | "W" => (
            "W4".into(),
            vec![("0001", half), ("0010", half), ("0100", half), ("1000", half)],
            "(|0001> + |0010> + |0100> + |1000>)/2",
        ),
        "OMEGA" | "Ω" | "CLUSTER" => (
            "OMEGA".into(),
            vec![("0000", half), ("0110", half), ("1001", half), ("1111", -half)],
            "(|0000> + |0110> + |1001> - |1111>)/2",
        ),
        "S1" => (
            "S1".into(),
            vec![("0000", half), ("0101", half), ("1000", half), ("1110", half)],
            "(|0000> + |0101> + |1000> + |1110>)/2",
        ),
        "S2" => (
            "S2".into(),
            vec![("0000", half), ("1011", half), ("1101", half), ("1110", half)],
            "(|0000> + |1011> + |1101> + |1110>)/2",
        ),
        "PHI+" => (
            "PHI+".into(),
            vec![("00", FRAC_1_SQRT_2), ("11", FRAC_1_SQRT_2)],
            "(|00> + |11>)/sqrt(2)",
        ),
        "PHI-" => (
            "PHI-".into(),
            vec![("00", FRAC_1_SQRT_2), ("11", -FRAC_1_SQRT_2)],
            "(|00> - |11>)/sqrt(2)",
        ),
        "PSI+" => (
            "PSI+".into(),
            vec![("01", FRAC_1_SQRT_2), ("10", FRAC_1_SQRT_2)],
            "(|01> + |10>)/sqrt(2)",
        ),
        "PSI-" => (
            "PSI-".into(),
            vec![("01", FRAC_1_SQRT_2), ("10", -FRAC_1_SQRT_2)],
            "(|01> - |10>)/sqrt(2)",
        ),
        other => {
            let n = parse_ghz_arity(other).ok_or_else(|| Error::UnknownState(name.to_string()))?;
            return Ok(ghz_entry(n));
        }
    };
    Ok(CatalogEntry {
        name: canonical,
        state: from_terms(&terms),
        source: source.to_string(),
    })
}

/// Every fixed entry followed by `GHZ(2)..=GHZ(6)`.
pub fn all_entries() -> Vec<CatalogEntry> {
    NAMES
        .iter()
        .map(|n| catalog_entry(n).expect("built-in name"))
        .chain(GHZ_RANGE.map(ghz_entry))
        .collect()
}

/// The five four-qubit resources, in the order GHZ4, OMEGA, W4, S1, S2.
pub fn four_qubit_resources() -> Vec<CatalogEntry> {
    ["GHZ4", "OMEGA", "W4", "S1", "S2"]
        .iter()
        .map(|n| catalog_entry(n).expect("built-in name"))
        .collect()
}

fn parse_ghz_arity(key: &str) -> Option<usize> {
    let inner = key.strip_prefix("GHZ(")?.strip_suffix(')')?;
    let n: usize = inner.trim().parse().ok()?;
    GHZ_RANGE.contains(&n).then_some(n)
}

fn ghz_entry(n: usize) -> CatalogEntry {
    let zeros = "0".repeat(n);
    let ones = "1".repeat(n);
    CatalogEntry {
        name: format!("GHZ({n})"),
        state: from_terms(&[(&zeros, FRAC_1_SQRT_2), (&ones, FRAC_1_SQRT_2)]),
        source: format!("(|{zeros}> + |{ones}>)/sqrt(2)"),
    }
}

fn from_terms(terms: &[(&str, f64)]) -> Ket {
    let n = terms[0].0.len();
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (bits, c) in terms {
        let idx = usize::from_str_radix(bits, 2).expect("binary literal");
        amps[idx] = Complex64::new(*c, 0.0);
    }
    Ket::from_amplitudes(n, amps).expect("catalog states are normalized")
}
