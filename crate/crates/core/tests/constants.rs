use std::f64::consts::PI;

use zerodensity::constants::*;
use zerodensity::special::zeta_real;
use zerodensity::tables::{table1_params, table2_params, TABLE2};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn mean_value_constants_at_k1() {
    let mv = mean_value_constants(1.0).unwrap();
    let l = H0.ln();
    assert!((l - 24.1446).abs() < 1e-4);
    assert!(rel(mv.c1, 6.0 / (PI * PI) + 1.048 / l) < 1e-15);
    assert!(rel(mv.a3, -6.0 * 0.63 / std::f64::consts::E + 2.851) < 1e-15);
}

#[test]
fn tail_constants_at_table_point() {
    let tc = tail_constants(1.0, 0.303).unwrap();
    // symbolic recomputation, term by term
    let l = H0.ln();
    let c5 = PI * m0() * 0.529 / 0.606 * (1.0 + 0.606 / l).powi(2) * (0.606 * 0.577_215_664_901_532_9 / l).exp();
    assert!(rel(tc.c5, c5) < 1e-14);
    assert!((tc.c5 - 3.846_063_562_737).abs() < 1e-9);
    assert!((tc.c6 - 0.264_980_030_515).abs() < 1e-9);
    // C5 ~ 1/δ for small δ
    let a = tail_constants(1.0, 1e-4).unwrap().c5;
    let b = tail_constants(1.0, 2e-4).unwrap().c5;
    assert!((a / b - 2.0).abs() < 1e-3);
    assert!(tail_constants(1.0, 40.0).unwrap().c6 < 1e-15);
}

#[test]
fn j_tends_to_leading_groups() {
    let k = 1.0;
    let alpha = 0.324;
    let mv = mean_value_constants(k).unwrap();
    let limit = eval_i(7.0 / 3.0, 0, alpha, 2.0).unwrap() + k * mv.c2 / mv.c1 * eval_i(4.0 / 3.0, 0, alpha, 2.0).unwrap();
    let far = eval_j(k, 1e200, alpha).unwrap();
    assert!(rel(far, limit) < 0.01, "{far} vs {limit}");
    let j = eval_j(k, H0, alpha).unwrap();
    assert!(j > limit);
}

#[test]
fn j_groups_positive_on_table_rows() {
    for alpha in [0.06, 0.105, 0.324] {
        let g = j_groups(1.0, H0, alpha).unwrap();
        assert!(g.iter().all(|x| *x > 0.0), "alpha = {alpha}: {g:?}");
    }
}

#[test]
fn u_above_one_and_decreasing() {
    let u = eval_u(0.105, 1.0, H0).unwrap();
    assert!(u > 1.0, "{u}");
    assert!(eval_u(0.105, 1.0, 10.0 * H0).unwrap() < u);
    let u2 = eval_u(0.324, 1.0, H0).unwrap();
    assert!((u2 - 1.0018).abs() < 1e-3, "{u2}");
}

#[test]
fn v_above_one_and_decreasing() {
    let (k_val, v) = eval_k_and_v(0.324, 1.0, 0.3, H0).unwrap();
    assert!(k_val > 0.0);
    assert!(v > 1.0, "{v}");
    let (_, v_far) = eval_k_and_v(0.324, 1.0, 0.3, 1e3 * H0).unwrap();
    assert!(v_far < v);
}

#[test]
fn m_branches_agree_at_boundary() {
    let k = (-0.6f64).exp();
    let direct = H0.ln() / ((k * H0).ln() + 0.6);
    assert!((direct - 1.0).abs() < 1e-14);
    assert!((eval_m(k, 0.3) - 1.0).abs() < 1e-14);
    assert!((eval_m(1e9 / H0, 0.3) - 1.1323).abs() < 1e-4);
}

#[test]
fn eta0_is_breakdown_point() {
    let e = eta0();
    assert!((e - 0.23622).abs() < 1e-5, "{e}");
    assert!((b6(1e9, e) - 1.0).abs() < 1e-8);
    assert!(argument_constants(1.0, e * 0.99, H0 - 1.0).is_err());
}

#[test]
fn b5_from_zeta_values() {
    let a = argument_constants(1.0, 0.2561, H0 - 1e-6).unwrap();
    let z = zeta_real(1.2561).unwrap();
    let z2 = zeta_real(2.5122).unwrap();
    assert!(rel(a.b5, z.powi(4) / (z2 * z2) + 2.0 * z * z / z2) < 1e-14);
    assert!(a.b8 > 1.0 && a.b8 < 1.0 + 1e-9);
}

#[test]
fn table2_script_c1_within_one_percent() {
    for row in TABLE2 {
        let p = table2_params(row.sigma).unwrap();
        let (c1, _) = script_constants(&p).unwrap();
        assert!(rel(c1, row.script_c1) < 0.01, "sigma = {}: {c1} vs {}", row.sigma, row.script_c1);
    }
}

#[test]
fn script_c1_increases_with_sigma() {
    let mut prev = 0.0;
    for row in TABLE2 {
        let (c1, _) = script_constants(&table2_params(row.sigma).unwrap()).unwrap();
        assert!(c1 > prev);
        prev = c1;
    }
}

#[test]
fn bundle_key_value_round_trip() {
    let p = table1_params(0.9).unwrap();
    let b = ConstantBundle::evaluate(&p).unwrap();
    let text = b.to_key_value();
    let parsed = parse_key_value(&text).unwrap();
    let entries = b.entries();
    assert_eq!(parsed.len(), entries.len());
    for ((name, v), (pname, ptext)) in entries.iter().zip(parsed) {
        assert_eq!(*name, pname);
        assert_eq!(v.to_bits(), ptext.parse::<f64>().unwrap().to_bits(), "{name}");
    }
    assert!(entries.iter().all(|(_, v)| v.is_finite()));
}

#[test]
fn parameter_set_round_trip_and_unknown_keys() {
    let p = table2_params(0.6).unwrap();
    let q = ParameterSet::from_key_value(&p.to_key_value()).unwrap();
    assert_eq!(p, q);
    let err = ParameterSet::from_key_value("sigma = 0.9\nfoo = 1\n").unwrap_err().to_string();
    assert!(err.contains("foo") && err.contains("alpha"), "{err}");
}

#[test]
fn c7_minimised_near_published_eta() {
    let c7 = |eta: f64| argument_constants(1.0, eta, H0 - 1.0).unwrap().c7;
    let at = c7(0.25618);
    assert!(at <= c7(0.2555) && at <= c7(0.2570));
}
