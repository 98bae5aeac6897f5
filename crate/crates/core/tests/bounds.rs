use proptest::prelude::*;
use zerodensity::constants::{ParameterSet, H0};
use zerodensity::error::Error;
use zerodensity::tables::{table1_params, table1_row, table2_params, TABLE2};
use zerodensity::{bound_log_form, bound_power_form, validate_params, BoundForm};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn power_form_at_sigma_090() {
    let r = bound_power_form(&table1_params(0.9).unwrap()).unwrap();
    assert_eq!(r.form, BoundForm::PowerForm);
    assert!(rel(r.a, 11.499) < 5e-3, "{}", r.a);
    assert!(rel(r.b, 3.186) < 5e-3, "{}", r.b);
    assert!(r.notes.iter().any(|n| n.contains("delta")));
}

#[test]
fn power_form_at_table_edges() {
    for sigma in [0.65, 0.99] {
        let row = table1_row(sigma).unwrap();
        let r = bound_power_form(&table1_params(sigma).unwrap()).unwrap();
        assert!(rel(r.a, row.a) < 5e-3, "sigma = {sigma}: A = {} vs {}", r.a, row.a);
        assert!(rel(r.b, row.b) < 5e-3, "sigma = {sigma}: B = {} vs {}", r.b, row.b);
    }
}

#[test]
fn log_form_at_h0() {
    let r = bound_log_form(&table2_params(0.9).unwrap()).unwrap();
    assert!(r.value <= 130.07 * 1.01, "{}", r.value);
    let r = bound_log_form(&table2_params(0.6).unwrap()).unwrap();
    assert!(r.value <= 520.28 * 1.01, "{}", r.value);
}

#[test]
fn log_form_decreases_in_sigma() {
    let mut prev = f64::INFINITY;
    for row in TABLE2 {
        let v = bound_log_form(&table2_params(row.sigma).unwrap()).unwrap().value;
        assert!(v < prev, "sigma = {}", row.sigma);
        prev = v;
    }
}

#[test]
fn power_form_value_decreases_in_sigma_at_fixed_params() {
    let base = ParameterSet { d: 1.0, ..table2_params(0.9).unwrap() };
    let mut prev = f64::INFINITY;
    for sigma in [0.7, 0.75, 0.8, 0.85, 0.9, 0.95] {
        let p = ParameterSet { sigma, ..base };
        let v = bound_power_form(&p).unwrap().value;
        assert!(v < prev, "sigma = {sigma}");
        prev = v;
    }
}

#[test]
fn bit_identical_on_repeat() {
    let p = table1_params(0.75).unwrap();
    let a = bound_power_form(&p).unwrap();
    let b = bound_power_form(&p).unwrap();
    assert_eq!(a.a.to_bits(), b.a.to_bits());
    assert_eq!(a.b.to_bits(), b.b.to_bits());
    assert_eq!(a.value.to_bits(), b.value.to_bits());
}

#[test]
fn validation_reports_every_failure() {
    let p = ParameterSet { sigma: 0.5, eta: 0.2, ..table1_params(0.9).unwrap() };
    let v = validate_params(&p);
    assert!(v.iter().any(|x| x.condition == "sigma ≤ 1/2 + d/log H0"), "{v:?}");
    assert!(v.iter().any(|x| x.condition.starts_with("eta below eta0")), "{v:?}");
    match bound_power_form(&p) {
        Err(Error::Validation(list)) => assert_eq!(list, v),
        other => panic!("expected validation error, got {other:?}"),
    }
}

#[test]
fn validation_rejects_out_of_range_inputs() {
    let good = table2_params(0.8).unwrap();
    let bad = [
        ParameterSet { k: 1.5, ..good },
        ParameterSet { k: 1e-3, ..good },
        ParameterSet { d: -0.1, ..good },
        ParameterSet { delta: 30.0, ..good },
        ParameterSet { mu: 1.3, ..good },
        ParameterSet { mu: 1.2, ..good },
        ParameterSet { h_gap: H0, ..good },
        ParameterSet { t: 1e9, ..good },
        ParameterSet { sigma: 1.0, ..good },
        ParameterSet { alpha: 0.0, ..good },
    ];
    for p in bad {
        assert!(!validate_params(&p).is_empty(), "{p:?}");
    }
    assert!(validate_params(&good).is_empty());
}

fn valid_params() -> impl Strategy<Value = ParameterSet> {
    (0.55f64..0.99, 0.0f64..6.0, 0.3f64..1.0, 0.05f64..0.6, 0.1f64..1.5, 0.05f64..0.9, 0.25f64..0.3, 0.0f64..1.0)
        .prop_map(|(sigma, log_t, k, alpha, delta, d, eta, mu_frac)| {
            let e0 = zerodensity::constants::eta0();
            let mu = 1.0 + e0 + mu_frac * (eta - e0);
            ParameterSet { sigma, t: H0 * 10f64.powf(log_t), k, alpha, delta, d, eta, mu, h_gap: 1.0 }
        })
        .prop_filter("admissible", |p| validate_params(p).is_empty())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_form_never_exceeds_power_form(p in valid_params()) {
        let lf = bound_log_form(&p).unwrap();
        let pf = bound_power_form(&p).unwrap();
        prop_assert_eq!(lf.b.to_bits(), pf.b.to_bits());
        prop_assert!(lf.value <= pf.value * (1.0 + 1e-12), "{} > {}", lf.value, pf.value);
    }
}
