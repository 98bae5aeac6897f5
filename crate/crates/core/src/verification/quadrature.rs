//! Adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// An integral with its error estimate |K15 - G7| summed over panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for QuadResult {
    type Output = QuadResult;
    fn add(self, o: QuadResult) -> QuadResult {
        QuadResult { value: self.value + o.value, error: self.error + o.error }
    }
}

/// The 15 abscissae of the Kronrod rule on [a, b], in the order used by
/// [`gk15_weighted`].
pub fn gk15_nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [0.0; 15];
    for i in 0..7 {
        out[2 * i] = c - h * XGK[i];
        out[2 * i + 1] = c + h * XGK[i];
    }
    out[14] = c;
    out
}

/// Apply the (7, 15) pair to values already sampled at [`gk15_nodes`].
pub fn gk15_weighted(a: f64, b: f64, values: &[f64; 15]) -> QuadResult {
    let h = 0.5 * (b - a);
    let mut k = WGK[7] * values[14];
    let mut g = WG[3] * values[14];
    for i in 0..7 {
        let pair = values[2 * i] + values[2 * i + 1];
        k += WGK[i] * pair;
        if i % 2 == 1 {
            g += WG[i / 2] * pair;
        }
    }
    QuadResult { value: k * h, error: ((k - g) * h).abs() }
}

pub fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> QuadResult {
    let nodes = gk15_nodes(a, b);
    let mut v = [0.0; 15];
    for (slot, x) in v.iter_mut().zip(nodes) {
        *slot = f(x);
    }
    gk15_weighted(a, b, &v)
}

const MAX_PANELS: usize = 4000;

/// Adaptive bisection of the worst panel until the summed error estimate
/// is below `max(abs_tol, rel_tol |I|)`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integrate", format!("non-finite limits [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, error: 0.0 });
    }
    let mut panels = vec![(a, b, gk15(&f, a, b))];
    loop {
        let value: f64 = panels.iter().map(|p| p.2.value).sum();
        let error: f64 = panels.iter().map(|p| p.2.error).sum();
        if !value.is_finite() {
            return Err(Error::PrecisionNotAttained {
                func: "integrate",
                detail: "integrand produced a non-finite value".into(),
            });
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadResult { value, error });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::PrecisionNotAttained {
                func: "integrate",
                detail: format!("error estimate {error:.3e} after {MAX_PANELS} panels"),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        panels.push((lo, mid, gk15(&f, lo, mid)));
        panels.push((mid, hi, gk15(&f, mid, hi)));
    }
}

/// ∫₀^∞ x^A exp(-2α x^β) (log x)^n dx by quadrature in u = log x, split at
/// the peak of the envelope and at u = 0.
pub fn moment_integral_quadrature(a: f64, n: u32, alpha: f64, beta: f64) -> Result<QuadResult> {
    if !(a > -1.0 && alpha > 0.0 && beta > 0.0) {
        return Err(Error::domain("moment_integral_quadrature", "requires A > -1, alpha > 0, beta > 0"));
    }
    let nf = n as f64;
    let log_env = |u: f64| (a + 1.0) * u - 2.0 * alpha * (beta * u).exp() + nf * u.abs().max(1.0).ln();
    // the integrand is below e^-80 outside [lo, hi]
    let mut lo = -1.0;
    while log_env(lo) > -80.0 {
        lo *= 1.5;
    }
    let mut hi = 1.0;
    while log_env(hi) > -80.0 {
        hi *= 1.5;
    }
    let peak = ((a + 1.0) / (2.0 * alpha * beta)).ln() / beta;
    let mut cuts = vec![lo, hi];
    for c in [peak, 0.0] {
        if c > lo && c < hi {
            cuts.push(c);
        }
    }
    cuts.sort_by(f64::total_cmp);
    let g = |u: f64| (log_env(u) - nf * u.abs().max(1.0).ln()).exp() * u.powi(n as i32);
    let mut total = QuadResult { value: 0.0, error: 0.0 };
    for w in cuts.windows(2) {
        total = total + integrate(g, w[0], w[1], 1e-17, 1e-13)?;
    }
    Ok(total)
}
