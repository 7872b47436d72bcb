mod common;

use itertools::Itertools;
use qcomm_core::catalog::{all_entries, catalog_state, four_qubit_resources};
use qcomm_core::entropy_table;

fn invariant_under_every_permutation(name: &str) -> bool {
    let state = catalog_state(name).unwrap();
    (1..=4)
        .permutations(4)
        .all(|order| state.reorder(&order).unwrap().max_abs_diff(&state) < 1e-15)
}

#[test]
fn symmetric_states_survive_all_24_relabelings() {
    assert_eq!((1..=4).permutations(4).count(), 24);
    assert!(invariant_under_every_permutation("GHZ4"));
    assert!(invariant_under_every_permutation("W4"));
}

#[test]
fn asymmetric_states_change_under_some_relabeling() {
    for name in ["OMEGA", "S1", "S2"] {
        assert!(!invariant_under_every_permutation(name), "{name}");
    }
}

#[test]
fn relabeling_permutes_entropies() {
    // S(rho_A) of the permuted state equals S(rho_pi(A)) of the original
    for entry in four_qubit_resources() {
        let table = entropy_table(&entry.state).unwrap();
        for order in (1..=4).permutations(4) {
            let moved = entropy_table(&entry.state.reorder(&order).unwrap()).unwrap();
            for row in &moved.rows {
                let original: Vec<usize> = row.side_a.iter().map(|&l| order[l - 1]).sorted().collect();
                let expected = table.get(&original).unwrap();
                assert!((row.entropy_bits - expected).abs() < 1e-9, "{} {:?}", entry.name, order);
            }
        }
    }
}

#[test]
fn reference_table_within_print_precision() {
    for (name, row) in common::TABLE_I {
        let table = entropy_table(&catalog_state(name).unwrap()).unwrap();
        for (cols, expected) in common::TABLE_I_COLUMNS.iter().zip(row) {
            let got = table.get(cols).unwrap();
            assert!((got - expected).abs() <= 5e-3, "{name} {cols:?}: {got} vs {expected}");
        }
    }
}

#[test]
fn every_entry_is_normalized_and_named_uniquely() {
    let entries = all_entries();
    let names: Vec<_> = entries.iter().map(|e| e.name.as_str()).collect();
    assert_eq!(names.iter().unique().count(), names.len());
    for e in &entries {
        assert!((e.state.norm() - 1.0).abs() < 1e-15, "{}", e.name);
    }
}
