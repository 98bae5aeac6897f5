//! Checks of the analytic inequalities: the mean value theorem for
//! Dirichlet polynomials, zeta bounds, the weight g, and the smoothed second
//! moment of f_X.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::arithmetic::mobius_and_divisors;
use super::quadrature::{gk15_nodes, gk15_weighted, QuadResult};
use super::LemmaReport;
use crate::constants::{m0, omega1, omega2, powr, A1, A2};
use crate::error::{Error, Result};
use crate::special::{zeta_complex, zeta_real, EvalPrecision};

const EPS: f64 = f64::EPSILON;

fn precision_guard(what: String, error: f64, margin: f64) -> Result<()> {
    if error > 0.01 * margin.abs() {
        Err(Error::QuadraturePrecision { what, error, margin })
    } else {
        Ok(())
    }
}

/// ∫_{T1}^{T2} |Σ u_n n^{it}|² dt <= Σ u_n² (T2 - T1 + 2π m0 (n + 1)),
/// with `u[0]` the coefficient of n = 1.
///
/// The left side is integrated term by term: each cross term contributes
/// 2 u_m u_n (sin(T2 ℓ) - sin(T1 ℓ))/ℓ with ℓ = log(n/m). The error bound
/// accounts for floating-point rounding, including the argument error of
/// sin at large T ℓ.
pub fn check_mv_inequality(u: &[f64], t1: f64, t2: f64) -> Result<LemmaReport> {
    if u.is_empty() || u.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("check_mv_inequality", "u must be a non-empty finite sequence"));
    }
    if !(t1 >= 0.0 && t1 < t2 && t2 <= 1e4) {
        return Err(Error::domain("check_mv_inequality", format!("need 0 <= T1 < T2 <= 1e4, got [{t1}, {t2}]")));
    }
    let len = t2 - t1;
    let logs: Vec<f64> = (1..=u.len()).map(|n| (n as f64).ln()).collect();
    let diag: f64 = u.iter().map(|v| v * v).sum();
    let mut cross = 0.0;
    let mut cross_abs = 0.0;
    for n in 1..u.len() {
        if u[n] == 0.0 {
            continue;
        }
        for m in 0..n {
            if u[m] == 0.0 {
                continue;
            }
            let l = logs[n] - logs[m];
            let c = 2.0 * u[m] * u[n];
            cross += c * ((t2 * l).sin() - (t1 * l).sin()) / l;
            cross_abs += c.abs() * (2.0 / l + 2.0 * t2);
        }
    }
    let lhs = diag * len + cross;
    let rhs: f64 = u
        .iter()
        .enumerate()
        .map(|(i, v)| v * v * (len + 2.0 * PI * m0() * (i as f64 + 2.0)))
        .sum();
    let terms = (u.len() * u.len()) as f64;
    let error = 8.0 * EPS * terms * (diag * len + cross_abs);
    let r = LemmaReport::new("mv", format!("N = {}, T in [{t1}, {t2}]", u.len()), lhs, rhs);
    precision_guard(format!("mean value integral, N = {}", u.len()), error, r.margin)?;
    Ok(r)
}

/// Entries uniform in [-1, 1], reproducible from `seed`.
pub fn random_mv_sequence(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Zeta bounds at each sample t:
///
/// * `zeta-half-line`: |ζ(1/2 + it)| <= a1 t^{1/6} log t (stated for t >= 3);
/// * `zeta-max`: max over |t'| <= T of |ζ(1/2 + it')| <= a1 T^{1/6} log T + a2
///   with T = |t|, the maximum taken over a grid of step 0.05, which bounds
///   the true maximum from below;
/// * `zeta-strip`: the convexity bound
///   |ζ(s)| <= 3 |1+s|/|1-s| (|1+s|/2π)^{(1-σ+η)/2} ζ(1+η) at
///   σ ∈ {-η, 0, 1/2, 1, 1+η}.
pub fn check_zeta_bounds(t_samples: &[f64], eta: f64) -> Result<Vec<LemmaReport>> {
    if !(eta > 0.0 && eta <= 0.5) {
        return Err(Error::domain("check_zeta_bounds", format!("eta must lie in (0, 1/2], got {eta}")));
    }
    let prec = EvalPrecision::default();
    let z1 = zeta_real(1.0 + eta)?;
    let mut out = Vec::new();
    for &t in t_samples {
        let at = t.abs();
        let zh = zeta_complex(Complex64::new(0.5, t), &prec)?.norm();
        let caveat = (at < 3.0).then(|| format!("stated for t >= 3; t = {t} is supporting evidence"));
        out.push(LemmaReport::new("zeta-half-line", format!("t = {t}"), zh, A1 * powr(at, 1.0 / 6.0) * at.ln()).with_caveat(caveat));

        if at > 0.0 {
            let step = 0.05;
            let n = (at / step).ceil() as usize;
            let max = (0..=n)
                .into_par_iter()
                .map(|i| {
                    let ti = (i as f64 * step).min(at);
                    zeta_complex(Complex64::new(0.5, ti), &prec).map(|z| z.norm())
                })
                .collect::<Result<Vec<f64>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            out.push(LemmaReport::new(
                "zeta-max",
                format!("T = {at}, grid step {step}"),
                max,
                A1 * powr(at, 1.0 / 6.0) * at.ln() + A2,
            ));
        }

        for sigma in [-eta, 0.0, 0.5, 1.0, 1.0 + eta] {
            if sigma == 1.0 && t == 0.0 {
                continue;
            }
            let s = Complex64::new(sigma, t);
            let lhs = zeta_complex(s, &prec)?.norm();
            let one = Complex64::new(1.0, 0.0);
            let rhs = 3.0 * (one + s).norm() / (one - s).norm() * powr((one + s).norm() / (2.0 * PI), 0.5 * (1.0 - sigma + eta)) * z1;
            out.push(LemmaReport::new("zeta-strip", format!("s = {sigma} + {t}i, eta = {eta}"), lhs, rhs));
        }
    }
    Ok(out)
}

/// g(s) = ((s-1)/s) exp(α (s/T)²) at s = σ + it.
pub fn weight_g(sigma: f64, t: f64, big_t: f64, alpha: f64) -> Complex64 {
    let s = Complex64::new(sigma, t);
    (s - 1.0) / s * (s * s * (alpha / (big_t * big_t))).exp()
}

/// Relative allowance for rounding in evaluating g.
const WEIGHT_ROUNDING: f64 = 1e-14;

/// For each t: |g(σ+it)| <= ω1 e^{-α(t/T)²} (`weight-upper`),
/// ω2 <= |g(σ+it)| when H <= t <= T (`weight-lower`), and
/// |g(σ-it)| = |g(σ+it)| (`weight-even`).
pub fn check_weight_bounds(sigma: f64, big_t: f64, alpha: f64, h: f64, t_samples: &[f64]) -> Vec<LemmaReport> {
    let w1 = omega1(sigma, big_t, alpha);
    let w2 = omega2(sigma, big_t, alpha, h);
    let caveat = if sigma < 0.5 {
        Some(format!("stated for sigma >= 1/2; sigma = {sigma} is supporting evidence"))
    } else if h < 1002.0 || h >= big_t {
        Some(format!("stated for 1002 <= H < T; H = {h} is supporting evidence"))
    } else {
        None
    };
    let mut out = Vec::new();
    for &t in t_samples {
        let g = weight_g(sigma, t, big_t, alpha).norm();
        let inst = format!("sigma = {sigma}, t = {t}");
        let envelope = w1 * (-alpha * (t / big_t).powi(2)).exp();
        out.push(LemmaReport::new("weight-upper", inst.clone(), g, envelope * (1.0 + WEIGHT_ROUNDING)).with_caveat(caveat.clone()));
        if t >= h && t <= big_t {
            out.push(LemmaReport::new("weight-lower", inst.clone(), w2, g * (1.0 + WEIGHT_ROUNDING)).with_caveat(caveat.clone()));
        }
        let mirror = weight_g(sigma, -t, big_t, alpha).norm();
        out.push(LemmaReport::new("weight-even", inst, (mirror - g).abs(), WEIGHT_ROUNDING * g).with_caveat(caveat.clone()));
    }
    out
}

/// Exponents a = 2(1-σ) + 2δ(2σ-1)/(log X + 2δ) and b = 1 - a of the
/// convexity step between σ1 = 1/2 and σ2 = 1 + δ/log X.
pub fn convexity_exponents(sigma: f64, delta: f64, log_x: f64) -> (f64, f64) {
    let a = 2.0 * (1.0 - sigma) + 2.0 * delta * (2.0 * sigma - 1.0) / (log_x + 2.0 * delta);
    (a, 1.0 - a)
}

const PANEL: f64 = 0.25;
/// The Gaussian factor of |g|² drops below this at the truncation point.
const ENVELOPE_CUTOFF: f64 = 1e-16;

struct SmoothedMoments {
    /// ℳ(σ) = ∫|g|²|f_X|² dt over |t| <= t_max.
    moment: QuadResult,
    /// 4ω1²αβ ∫ x^{β-1} e^{-2αx^β} F_X(σ, xT) dx, exact on xT <= t_max and
    /// bounded below beyond it.
    smoothing_rhs: QuadResult,
}

fn smoothed_moments(sigma: f64, mollifier: &[(f64, f64)], big_t: f64, alpha: f64, t_max: f64) -> Result<SmoothedMoments> {
    let prec = EvalPrecision::default();
    let panels = (t_max / PANEL).ceil() as usize;
    let envelope = |t: f64| (-2.0 * alpha * (t / big_t).powi(2)).exp();
    let parts = (0..panels)
        .into_par_iter()
        .map(|i| {
            let a = i as f64 * PANEL;
            let b = a + PANEL;
            let eb = envelope(b);
            let mut weighted = [0.0; 15];
            let mut plain = [0.0; 15];
            let mut tail = [0.0; 15];
            for (j, t) in gk15_nodes(a, b).into_iter().enumerate() {
                let s = Complex64::new(sigma, t);
                let m: Complex64 = mollifier.iter().map(|&(ln, mu)| (-s * ln).exp() * mu).sum();
                let f2 = (zeta_complex(s, &prec)? * m - 1.0).norm_sqr();
                weighted[j] = weight_g(sigma, t, big_t, alpha).norm_sqr() * f2;
                plain[j] = f2;
                tail[j] = f2 * (envelope(t) - eb);
            }
            Ok((
                gk15_weighted(a, b, &weighted),
                gk15_weighted(a, b, &plain),
                gk15_weighted(a, b, &tail),
                envelope(a) - eb,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let w1 = omega1(sigma, big_t, alpha);
    let mut moment = QuadResult { value: 0.0, error: 0.0 };
    let mut rhs = QuadResult { value: 0.0, error: 0.0 };
    // F_X(σ, a) at the left end of each panel
    let mut cumulative = QuadResult { value: 0.0, error: 0.0 };
    for (wq, pq, tq, drop) in parts {
        moment = moment + wq;
        rhs.value += cumulative.value * drop + tq.value;
        rhs.error += cumulative.error * drop + tq.error;
        cumulative = cumulative + pq;
    }
    // F_X is non-decreasing, so the weight beyond t_max contributes at least
    // F_X(σ, t_max) e^{-2α(t_max/T)²}
    let t_end = panels as f64 * PANEL;
    rhs.value += cumulative.value * envelope(t_end);
    rhs.error += cumulative.error * envelope(t_end);
    // |g| and |f_X| are even in t
    let c = 2.0 * w1 * w1;
    Ok(SmoothedMoments {
        moment: QuadResult { value: 2.0 * moment.value, error: 2.0 * moment.error },
        smoothing_rhs: QuadResult { value: c * rhs.value, error: c * rhs.error },
    })
}

/// Convexity of ℳ in σ (`convexity`) and the integration-by-parts bound
/// for ℳ(σ) (`smoothing`), at toy scale.
///
/// ℳ(σ) = ∫ |g(σ+it)|² |f_X(σ+it)|² dt with f_X = ζ M_X - 1 is computed by
/// Gauss–Kronrod panels of width 1/4 on |t| <= t_max, where
/// e^{-2α(t_max/T)²} = 1e-16.
pub fn check_smoothing_and_convexity(x: u64, big_t: f64, sigmas: (f64, f64, f64), alpha: f64) -> Result<[LemmaReport; 2]> {
    let (s1, s, s2) = sigmas;
    if !(1..=200).contains(&x) || !(big_t > 0.0 && big_t <= 200.0) {
        return Err(Error::Budget(format!("toy scale needs X <= 200 and 0 < T <= 200, got X = {x}, T = {big_t}")));
    }
    if !(s1 >= 0.5 && s1 <= s && s <= s2 && s1 < s2) || !(alpha > 0.0) {
        return Err(Error::domain("check_smoothing_and_convexity", "need 1/2 <= sigma1 <= sigma <= sigma2, sigma1 < sigma2, alpha > 0"));
    }
    let (mu, _) = mobius_and_divisors(x as usize);
    let mollifier: Vec<(f64, f64)> = (1..=x as usize)
        .filter(|&n| mu[n] != 0)
        .map(|n| ((n as f64).ln(), mu[n] as f64))
        .collect();
    let t_max = big_t * ((1.0 / ENVELOPE_CUTOFF).ln() / (2.0 * alpha)).sqrt();

    let lo = smoothed_moments(s1, &mollifier, big_t, alpha, t_max)?;
    let hi = smoothed_moments(s2, &mollifier, big_t, alpha, t_max)?;
    let mid_owned;
    let mid_full = if s == s1 {
        &lo
    } else if s == s2 {
        &hi
    } else {
        mid_owned = smoothed_moments(s, &mollifier, big_t, alpha, t_max)?;
        &mid_owned
    };
    let mid = mid_full.moment;

    let a = (s2 - s) / (s2 - s1);
    let b = (s - s1) / (s2 - s1);
    let inst = format!("X = {x}, T = {big_t}, sigma = ({s1}, {s}, {s2}), alpha = {alpha}, |t| <= {t_max:.1}");
    let caveat = (!(s1 < 1.0 && 1.0 < s2)).then(|| "stated for sigma1 < 1 < sigma2".to_string());

    let rhs = lo.moment.value.powf(a) * hi.moment.value.powf(b);
    let convexity = LemmaReport::new("convexity", inst.clone(), mid.value, rhs).with_caveat(caveat);
    if s != s1 && s != s2 {
        let err = mid.error + rhs * (a * lo.moment.error / lo.moment.value + b * hi.moment.error / hi.moment.value);
        precision_guard(format!("convexity at {inst}"), err, convexity.margin)?;
    }

    let smoothing = LemmaReport::new("smoothing", inst.clone(), mid_full.moment.value, mid_full.smoothing_rhs.value);
    precision_guard(
        format!("smoothing at {inst}"),
        mid_full.moment.error + mid_full.smoothing_rhs.error,
        smoothing.margin,
    )?;
    Ok([convexity, smoothing])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mv_single_term() {
        let r = check_mv_inequality(&[1.0], 0.0, 50.0).unwrap();
        assert_eq!(r.lhs, 50.0);
        assert!((r.rhs - (50.0 + 4.0 * PI * m0())).abs() < 1e-12);
    }

    #[test]
    fn mv_two_terms_closed_form() {
        let t = 100.0;
        let r = check_mv_inequality(&[1.0, 1.0], 0.0, t).unwrap();
        let l2 = 2f64.ln();
        assert!((r.lhs - (2.0 * t + 2.0 * (t * l2).sin() / l2)).abs() < 1e-10);
        assert!(r.pass);
    }

    #[test]
    fn mv_rejects_bad_range() {
        assert!(check_mv_inequality(&[1.0], 5.0, 1.0).is_err());
        assert!(check_mv_inequality(&[], 0.0, 1.0).is_err());
        assert!(check_mv_inequality(&[1.0], 0.0, 2e4).is_err());
    }

    #[test]
    fn weight_at_origin_is_envelope() {
        let r = check_weight_bounds(0.5, 50.0, 0.3, 1002.0, &[0.0]);
        assert!(r.iter().all(|x| x.pass), "{r:?}");
        assert!((r[0].lhs - omega1(0.5, 50.0, 0.3)).abs() < 1e-15);
    }

    #[test]
    fn exponents_match_ratios() {
        let (a, b) = convexity_exponents(0.8, 0.3, 20.0);
        let s2 = 1.0 + 0.3 / 20.0;
        assert!((a - (s2 - 0.8) / (s2 - 0.5)).abs() < 1e-14);
        assert!((b - (0.8 - 0.5) / (s2 - 0.5)).abs() < 1e-14);
    }

    #[test]
    fn strip_bound_on_real_axis() {
        let r = check_zeta_bounds(&[0.0], 0.3).unwrap();
        let at_one_plus_eta = r.iter().find(|x| x.instance.starts_with("s = 1.3 ")).unwrap();
        assert!(at_one_plus_eta.pass);
        assert!((at_one_plus_eta.lhs - zeta_real(1.3).unwrap()).abs() < 1e-10);
    }
}
