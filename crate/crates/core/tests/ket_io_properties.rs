use num_complex::Complex64;
use proptest::prelude::*;
use qcomm_core::catalog::all_entries;
use qcomm_core::ket_io::{format_ket, from_json, parse_ket, parse_ket_raw, to_json};
use qcomm_core::random::{random_ket, seeded};
use qcomm_core::Ket;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn format_then_parse_round_trips(seed in any::<u64>(), n in 1usize..=6) {
        let state = random_ket(&mut seeded(seed), n);
        let text = format_ket(&state, 0.0);
        let back = parse_ket(&text).unwrap();
        prop_assert!(back.max_abs_diff(&state) <= 1e-9, "{}", text);
    }

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), n in 1usize..=6) {
        let state = random_ket(&mut seeded(seed), n);
        prop_assert_eq!(from_json(&to_json(&state)).unwrap(), state);
    }

    #[test]
    fn scaling_the_input_reports_its_norm(seed in any::<u64>(), scale in 0.1f64..10.0) {
        let state = random_ket(&mut seeded(seed), 2);
        let scaled = Ket::normalized(2, state.amplitudes().iter().map(|z| z * scale).collect()).unwrap().0;
        let text: String = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, z)| format!("({:.17}{:+.17}i)*{scale}|{i:02b}>", z.re, z.im))
            .collect::<Vec<_>>()
            .join(" + ");
        let parsed = parse_ket_raw(&text).unwrap();
        prop_assert!((parsed.input_norm - scale).abs() <= 1e-9 * scale);
        prop_assert!(parsed.ket.max_abs_diff(&scaled) <= 1e-9);
    }
}

#[test]
fn catalog_states_round_trip_through_text() {
    for entry in all_entries() {
        let text = format_ket(&entry.state, 1e-12);
        assert!(
            parse_ket(&text).unwrap().max_abs_diff(&entry.state) <= 1e-9,
            "{}",
            entry.name
        );
    }
}

#[test]
fn complex_and_negative_coefficients_format() {
    let s = 0.5;
    let state = Ket::from_amplitudes(
        2,
        vec![
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(0.0, s),
            Complex64::new(0.3, -0.4).unscale(1.0) * (s / 0.5),
        ],
    )
    .unwrap();
    let text = format_ket(&state, 0.0);
    assert_eq!(text, "0.5|00> - 0.5|01> + 0.5i|10> + (0.3-0.4i)|11>");
    assert!(parse_ket(&text).unwrap().max_abs_diff(&state) < 1e-12);
}

#[test]
fn malformed_expressions_are_rejected() {
    for bad in ["", "|0> +", "|01> + |0>", "|2>", "(|0>", "|0> |1>", "sqrt|0>", "|0>/0"] {
        assert!(parse_ket(bad).is_err(), "{bad}");
    }
}
