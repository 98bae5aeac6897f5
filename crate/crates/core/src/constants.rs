//! The constant cascade behind the zero-density bound.
//!
//! All logarithms are natural. Real powers go through [`powr`] so every
//! quantity is computed as `exp(y * ln x)` on every platform.

use std::f64::consts::{E, PI};
use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::special::{gamma_deriv, zeta_real, EULER_GAMMA};

/// Height up to which all zeros are known to lie on the critical line.
pub const H0: f64 = 3.061_004_6e10;
pub const A1: f64 = 0.63;
pub const A2: f64 = 2.851;
pub const B1: f64 = 0.62;
pub const B2: f64 = 1.048;
pub const B3: f64 = 0.605;
pub const B4: f64 = 0.529;
/// Lower end of the admissible range for k (k H0 >= 1e9).
pub const K_MIN: f64 = 1e9 / H0;
/// Smallest admissible H.
pub const H_MIN: f64 = 1002.0;
/// Anchor point for the `b6` lower bound on the argument circle.
pub const X_ARG: f64 = 1e9;

/// Weight exponent; the Gaussian-type weight decays like exp(-α (t/T)^2).
pub const BETA: f64 = 2.0;

/// Canonical real power `x^y = exp(y ln x)`.
#[inline]
pub fn powr(x: f64, y: f64) -> f64 {
    (y * x.ln()).exp()
}

pub fn m0() -> f64 {
    (1.0 + (2.0 / 3.0) * (6.0_f64 / 5.0).sqrt()).sqrt()
}

/// Upper end of the δ range: log H0 (log log H0 - 1) / 2 ≈ 26.36.
pub fn delta_max() -> f64 {
    let l = H0.ln();
    l * (l.ln() - 1.0) / 2.0
}

/// Root of `b6(1e9, η) = 1` on (0, 1/2), found by bisection to 1e-12.
pub fn eta0() -> f64 {
    static ETA0: OnceLock<f64> = OnceLock::new();
    *ETA0.get_or_init(|| {
        let (mut lo, mut hi) = (0.05_f64, 0.5_f64);
        // b6 is decreasing in η on this interval
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if b6(X_ARG, mid) > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Fixed numeric inputs taken from the literature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedInputs {
    pub h0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
    pub m0: f64,
    pub eta0: f64,
    pub euler_gamma: f64,
}

impl FixedInputs {
    pub fn get() -> Self {
        Self {
            h0: H0,
            a1: A1,
            a2: A2,
            b1: B1,
            b2: B2,
            b3: B3,
            b4: B4,
            m0: m0(),
            eta0: eta0(),
            euler_gamma: EULER_GAMMA,
        }
    }
}

/// The full tuple of free parameters.
///
/// `H` is stored through its distance below `H0` (`h_gap = H0 - H`) because
/// gaps such as 1e-6 are below the resolution of an `f64` near 3e10.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSet {
    pub sigma: f64,
    pub t: f64,
    pub k: f64,
    pub alpha: f64,
    pub delta: f64,
    pub d: f64,
    pub eta: f64,
    pub mu: f64,
    pub h_gap: f64,
}

/// Keys accepted by [`ParameterSet::from_key_value`].
pub const PARAMETER_KEYS: [&str; 10] = [
    "sigma", "T", "k", "alpha", "delta", "d", "eta", "mu", "H0_minus_H", "H",
];

impl ParameterSet {
    /// The ordinate H.
    pub fn h(&self) -> f64 {
        H0 - self.h_gap
    }

    /// T - H, computed without cancellation.
    pub fn t_minus_h(&self) -> f64 {
        (self.t - H0) + self.h_gap
    }

    /// `name = value` lines with 17 significant digits.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for (name, v) in [
            ("sigma", self.sigma),
            ("T", self.t),
            ("k", self.k),
            ("alpha", self.alpha),
            ("delta", self.delta),
            ("d", self.d),
            ("eta", self.eta),
            ("mu", self.mu),
            ("H0_minus_H", self.h_gap),
        ] {
            let _ = writeln!(out, "{name} = {}", fmt17(v));
        }
        out
    }

    /// Parse `name = value` lines; `#` starts a comment. Every parameter must
    /// be present (`H` may be given directly or as `H0_minus_H`).
    pub fn from_key_value(text: &str) -> Result<Self> {
        let mut p = PartialParams::default();
        p.apply_text(text)?;
        p.finish()
    }
}

/// Parameter values collected from several sources before completion.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PartialParams {
    pub sigma: Option<f64>,
    pub t: Option<f64>,
    pub k: Option<f64>,
    pub alpha: Option<f64>,
    pub delta: Option<f64>,
    pub d: Option<f64>,
    pub eta: Option<f64>,
    pub mu: Option<f64>,
    pub h_gap: Option<f64>,
}

impl PartialParams {
    pub fn from_params(p: &ParameterSet) -> Self {
        Self {
            sigma: Some(p.sigma),
            t: Some(p.t),
            k: Some(p.k),
            alpha: Some(p.alpha),
            delta: Some(p.delta),
            d: Some(p.d),
            eta: Some(p.eta),
            mu: Some(p.mu),
            h_gap: Some(p.h_gap),
        }
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "sigma" => &mut self.sigma,
            "T" => &mut self.t,
            "k" => &mut self.k,
            "alpha" => &mut self.alpha,
            "delta" => &mut self.delta,
            "d" => &mut self.d,
            "eta" => &mut self.eta,
            "mu" => &mut self.mu,
            "H0_minus_H" => &mut self.h_gap,
            "H" => {
                self.h_gap = Some(H0 - value);
                return Ok(());
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unknown key `{key}`; valid keys: {}",
                    PARAMETER_KEYS.join(", ")
                )))
            }
        };
        *slot = Some(value);
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_key_value(text)? {
            let v: f64 = value
                .parse()
                .map_err(|_| Error::Parse(format!("value for `{key}` is not a number: `{value}`")))?;
            self.set(&key, v)?;
        }
        Ok(())
    }

    /// Fill unset fields from `other`.
    pub fn or(self, other: PartialParams) -> Self {
        Self {
            sigma: self.sigma.or(other.sigma),
            t: self.t.or(other.t),
            k: self.k.or(other.k),
            alpha: self.alpha.or(other.alpha),
            delta: self.delta.or(other.delta),
            d: self.d.or(other.d),
            eta: self.eta.or(other.eta),
            mu: self.mu.or(other.mu),
            h_gap: self.h_gap.or(other.h_gap),
        }
    }

    pub fn finish(self) -> Result<ParameterSet> {
        let mut missing = Vec::new();
        let mut take = |name: &str, v: Option<f64>| {
            v.unwrap_or_else(|| {
                missing.push(name.to_string());
                f64::NAN
            })
        };
        let p = ParameterSet {
            sigma: take("sigma", self.sigma),
            t: take("T", self.t),
            k: take("k", self.k),
            alpha: take("alpha", self.alpha),
            delta: take("delta", self.delta),
            d: take("d", self.d),
            eta: take("eta", self.eta),
            mu: take("mu", self.mu),
            h_gap: take("H", self.h_gap),
        };
        if missing.is_empty() {
            Ok(p)
        } else {
            Err(Error::Parse(format!("missing parameters: {}", missing.join(", "))))
        }
    }
}

/// Split `name = value` lines, dropping blanks and `#` comments.
pub fn parse_key_value(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `name = value`", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// ∫₀^∞ x^A exp(-2α x^β) (log x)^n dx via the Gamma-derivative closed form.
pub fn eval_i(a: f64, n: u32, alpha: f64, beta: f64) -> Result<f64> {
    if !(a > -1.0) {
        return Err(Error::domain("eval_i", format!("requires A > -1, got {a}")));
    }
    if n > 2 {
        return Err(Error::domain("eval_i", format!("n must be 0, 1 or 2, got {n}")));
    }
    if !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::domain("eval_i", "alpha and beta must be positive"));
    }
    let z = (a + 1.0) / beta;
    let l = -(2.0 * alpha).ln();
    let binom = [[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [1.0, 2.0, 1.0]];
    let mut sum = 0.0;
    for j in 0..=n {
        sum += binom[n as usize][j as usize] * l.powi(j as i32) * gamma_deriv(n - j, z)?;
    }
    Ok(powr(2.0 * alpha, -z) * beta.powi(-(n as i32 + 1)) * sum)
}

#[inline]
fn moment(a: f64, n: u32, alpha: f64) -> Result<f64> {
    eval_i(a, n, alpha, BETA)
}

fn check_k(func: &'static str, k: f64) -> Result<()> {
    if (K_MIN * (1.0 - 1e-12)..=1.0).contains(&k) {
        Ok(())
    } else {
        Err(Error::domain(func, format!("k = {k} outside [1e9/H0, 1]")))
    }
}

/// Constants of the mean-square bounds on the critical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueConstants {
    pub c1: f64,
    pub c2: f64,
    pub a3: f64,
    pub c3: f64,
    pub c4: f64,
}

pub fn mean_value_constants(k: f64) -> Result<MeanValueConstants> {
    check_k("mean_value_constants", k)?;
    let m0 = m0();
    let kh = k * H0;
    let l = kh.ln();
    let c1 = 6.0 / (PI * PI) + B2 / l;
    let c2 = PI * m0 * B1 / l + 6.0 * m0 / (PI * kh) + PI * m0 * B2 / (kh * l);
    let a3 = -6.0 * A1 / E + A2;
    let c3 = a3 * a3 * c1 * l;
    let c4 = c1 * A1 * A1 * (1.0 + 1.0 / c3.sqrt()).powi(2);
    Ok(MeanValueConstants { c1, c2, a3, c3, c4 })
}

/// The seven groups whose sum is 𝒥(k, T), with β = 2:
///
/// ```text
/// I(7/3,0) | r I(4/3,0) | 2(I(7/3,1) + r I(4/3,1))/L | (I(7/3,2) + r I(4/3,2))/L²
/// | 2a₂(I(13/6,0) + r I(7/6,0))/(a₁T^{1/6}L) | 2a₂(I(13/6,1) + r I(7/6,1))/(a₁T^{1/6}L²)
/// | a₂²(I(2,0) + r I(1,0))/(a₁²T^{1/3}L²)
/// ```
///
/// where r = k C₂/C₁ and L = log T.
pub fn j_groups(k: f64, t: f64, alpha: f64) -> Result<[f64; 7]> {
    let mv = mean_value_constants(k)?;
    let r = k * mv.c2 / mv.c1;
    let lt = t.ln();
    let t6 = powr(t, 1.0 / 6.0);
    let t3 = powr(t, 1.0 / 3.0);
    let b = BETA;
    let i = |a: f64, n: u32| moment(a, n, alpha);
    Ok([
        i(b + 1.0 / 3.0, 0)?,
        r * i(b - 2.0 / 3.0, 0)?,
        2.0 * (i(b + 1.0 / 3.0, 1)? + r * i(b - 2.0 / 3.0, 1)?) / lt,
        (i(b + 1.0 / 3.0, 2)? + r * i(b - 2.0 / 3.0, 2)?) / (lt * lt),
        2.0 * A2 * (i(b + 1.0 / 6.0, 0)? + r * i(b - 5.0 / 6.0, 0)?) / (A1 * t6 * lt),
        2.0 * A2 * (i(b + 1.0 / 6.0, 1)? + r * i(b - 5.0 / 6.0, 1)?) / (A1 * t6 * lt * lt),
        A2 * A2 * (i(b, 0)? + r * i(b - 1.0, 0)?) / (A1 * A1 * t3 * lt * lt),
    ])
}

/// Every (A, n) with which I(A, n) enters 𝒥 and 𝒦.
pub const MOMENT_PAIRS: [(f64, u32); 12] = [
    (7.0 / 3.0, 0),
    (7.0 / 3.0, 1),
    (7.0 / 3.0, 2),
    (4.0 / 3.0, 0),
    (4.0 / 3.0, 1),
    (4.0 / 3.0, 2),
    (13.0 / 6.0, 0),
    (13.0 / 6.0, 1),
    (7.0 / 6.0, 0),
    (7.0 / 6.0, 1),
    (2.0, 0),
    (1.0, 0),
];

pub fn eval_j(k: f64, t: f64, alpha: f64) -> Result<f64> {
    Ok(j_groups(k, t, alpha)?.iter().sum())
}

/// ω₁(σ, T, α) = exp(α (σ/T)²).
pub fn omega1(sigma: f64, t: f64, alpha: f64) -> f64 {
    (alpha * (sigma / t).powi(2)).exp()
}

/// ω₂(σ, T, α) = (1 - 1/H) exp(α (σ/T)² - α).
pub fn omega2(sigma: f64, t: f64, alpha: f64, h: f64) -> f64 {
    (1.0 - 1.0 / h) * (alpha * (sigma / t).powi(2) - alpha).exp()
}

/// 𝒰(α, k, T) = 4αβ C₄ ω₁(1/2, T, α)² 𝒥(k, T).
pub fn eval_u(alpha: f64, k: f64, t: f64) -> Result<f64> {
    let c4 = mean_value_constants(k)?.c4;
    let w = omega1(0.5, t, alpha);
    Ok(4.0 * alpha * BETA * c4 * w * w * eval_j(k, t, alpha)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailConstants {
    pub c5: f64,
    pub c6: f64,
}

pub fn tail_constants(k: f64, delta: f64) -> Result<TailConstants> {
    check_k("tail_constants", k)?;
    if !(delta > 0.0) {
        return Err(Error::domain("tail_constants", format!("delta must be positive, got {delta}")));
    }
    let l = (k * H0).ln();
    let c5 = PI * m0() * B4 / (2.0 * delta)
        * (1.0 + 2.0 * delta / l).powi(2)
        * (2.0 * delta * EULER_GAMMA / l).exp();
    let c6 = B4 / (5.0 * delta * delta.exp()) * (1.0 + delta / l).powi(2)
        + B3 * (-2.0 * delta).exp() / (l * l);
    Ok(TailConstants { c5, c6 })
}

/// Returns (𝒦, 𝒱) at σ₂ = 1 + δ / log(kT).
pub fn eval_k_and_v(alpha: f64, k: f64, delta: f64, t: f64) -> Result<(f64, f64)> {
    let TailConstants { c5, c6 } = tail_constants(k, delta)?;
    let kk = (c5 + c6 * PI * m0() / (k * t)) * moment(1.0, 0, alpha)? + c6 / k * moment(2.0, 0, alpha)?;
    let sigma2 = 1.0 + delta / (k * t).ln();
    let w = omega1(sigma2, t, alpha);
    // 4αβ with β = 2
    let v = 4.0 * alpha * BETA * w * w * kk;
    Ok((kk, v))
}

/// M(k, δ): bound for log T / (log kT + 2δ) over T >= H0.
pub fn eval_m(k: f64, delta: f64) -> f64 {
    if k.ln() + 2.0 * delta < 0.0 {
        H0.ln() / ((k * H0).ln() + 2.0 * delta)
    } else {
        1.0
    }
}

/// Upper bound for |f_X(1 + η + it)| from the divisor-sum tail.
pub fn b6(x: f64, eta: f64) -> f64 {
    let lx = x.ln();
    (1.0 + eta) * lx / (eta * powr(x, eta))
        * (1.0 + 1.0 / (eta * lx) + EULER_GAMMA / lx + 7.0 * eta / (12.0 * (1.0 + eta) * x * lx))
}

/// Constants bounding the argument of the mollified function on
/// horizontal segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgumentConstants {
    pub b5: f64,
    pub b6_at_1e9: f64,
    pub b7: f64,
    pub b8: f64,
    pub b9: f64,
    pub c7: f64,
}

pub fn argument_constants(k: f64, eta: f64, h: f64) -> Result<ArgumentConstants> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::domain("argument_constants", format!("eta = {eta} outside (0, 1/2)")));
    }
    if !(h >= H_MIN) {
        return Err(Error::domain("argument_constants", format!("H = {h} below 1002")));
    }
    check_k("argument_constants", k)?;
    let b6v = b6(X_ARG, eta);
    if 1.0 - b6v * b6v <= 0.0 {
        return Err(Error::domain(
            "argument_constants",
            format!("1 - b6(1e9, eta)^2 <= 0 at eta = {eta}"),
        ));
    }
    let z = zeta_real(1.0 + eta)?;
    let z2 = zeta_real(2.0 + 2.0 * eta)?;
    let b5 = z.powi(4) / (z2 * z2) + 2.0 * z * z / z2;
    let c = 3.006 * z;
    let b7 = (1.0 + 2.0 / (c * powr(k * H0, 1.0 + eta))) * c * c;
    let b8 = ((2.0 + eta).powi(2) / (h * h) + ((1.0 + 2.0 * eta) / h + 1.0).powi(2)).sqrt();
    let ln2 = 2.0_f64.ln();
    let b9 = PI * b7.ln() / ln2 + PI * b5.ln() / ln2 - 2.0 * PI * (1.0 - b6v * b6v).ln() / ln2
        + PI
        + 2.0 * (1.0 + 2.0 * eta) / ln2 * (b8 / (2.0 * PI)).ln();
    let c7 = (2.0 * (1.0 + 2.0 * eta) + 2.0 * PI * (1.0 + eta)) / ln2 + b9 / H0.ln();
    Ok(ArgumentConstants {
        b5,
        b6_at_1e9: b6v,
        b7,
        b8,
        b9,
        c7,
    })
}

/// 1 + 3/((τ-1)L) + 6/((τ-1)²L²) + 6/((τ-1)³L³) with L = log X.
pub fn b11(x: f64, tau: f64) -> f64 {
    let u = 1.0 / ((tau - 1.0) * x.ln());
    1.0 + 3.0 * u + 6.0 * u * u + 6.0 * u * u * u
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogConstants {
    pub b10: f64,
    pub b11_2mu: f64,
    pub b11_2mu_minus_1: f64,
    pub c8: f64,
}

pub fn log_constants(k: f64, mu: f64) -> Result<LogConstants> {
    check_k("log_constants", k)?;
    if !(mu > 1.0) {
        return Err(Error::domain("log_constants", format!("mu = {mu} must exceed 1")));
    }
    let x = k * H0;
    let u = b6(x, mu - 1.0);
    if !(u < 1.0) {
        return Err(Error::domain("log_constants", format!("b6(kH0, mu - 1) = {u} >= 1")));
    }
    let b10 = -(1.0 - u * u).ln() / (u * u);
    let b11_2mu = b11(x, 2.0 * mu);
    let b11_2mu_minus_1 = b11(x, 2.0 * mu - 1.0);
    let lx = x.ln();
    let c8 = b10 * lx * lx / powr(x, 2.0 * mu - 2.0)
        * (4.0 * mu * b11_2mu / (k * (2.0 * mu - 1.0))
            + 2.0 * PI * m0() * (2.0 * mu - 1.0) * b11_2mu_minus_1 / (mu - 1.0));
    Ok(LogConstants {
        b10,
        b11_2mu,
        b11_2mu_minus_1,
        c8,
    })
}

pub fn b12(h: f64) -> f64 {
    1.0 / (2.0 * (1.0 - 1.0 / h).powi(2))
}

/// The two master constants (𝒞₁, 𝒞₂).
pub fn script_constants(p: &ParameterSet) -> Result<(f64, f64)> {
    let b = ConstantBundle::evaluate(p)?;
    Ok((b.script_c1, b.script_c2))
}

/// Every derived constant for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantBundle {
    pub c1: f64,
    pub c2: f64,
    pub a3: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub b5: f64,
    pub b6: f64,
    pub b7: f64,
    pub b8: f64,
    pub b9: f64,
    pub b10: f64,
    pub b11_2mu: f64,
    pub b11_2mu_minus_1: f64,
    pub b12: f64,
    pub m_k_delta: f64,
    pub omega1_half: f64,
    pub omega2_sigma: f64,
    pub u: f64,
    pub v: f64,
    pub j: f64,
    pub k: f64,
    pub script_c1: f64,
    pub script_c2: f64,
}

impl ConstantBundle {
    /// Constants for `p`, with 𝒰, 𝒱, 𝒥, 𝒦 taken at T = H0.
    pub fn evaluate(p: &ParameterSet) -> Result<Self> {
        let mv = mean_value_constants(p.k)?;
        let tc = tail_constants(p.k, p.delta)?;
        let h = p.h();
        let ac = argument_constants(p.k, p.eta, h)?;
        let lc = log_constants(p.k, p.mu)?;
        let j = eval_j(p.k, H0, p.alpha)?;
        let u = eval_u(p.alpha, p.k, H0)?;
        if !(u > 1.0) {
            return Err(Error::domain(
                "script_constants",
                format!("U(alpha, k, H0) = {u} must exceed 1"),
            ));
        }
        let (kk, v) = eval_k_and_v(p.alpha, p.k, p.delta, H0)?;
        let m = eval_m(p.k, p.delta);
        let b12v = b12(h);

        let (sigma, delta, d, alpha) = (p.sigma, p.delta, p.d, p.alpha);
        let lh0 = H0.ln();
        let llh0 = lh0.ln();
        let lkh = (p.k * H0).ln();
        let s = 2.0 * sigma - 1.0;
        let growth = (8.0 / 3.0) * delta * s * m + 4.0 * delta * s * llh0 / (lkh + 2.0 * delta);
        let u_exp = 2.0 * (1.0 - sigma) + 2.0 * d / lh0 + 2.0 * delta * s / (lkh + 2.0 * delta);
        let shift = 2.0 * d * (2.0 * llh0 - lkh.ln()) / lh0 + 8.0 * d / 3.0 + 2.0 * alpha;
        let script_c1 = b12v * growth.exp() * powr(u, u_exp) * powr(v, s) * shift.exp();
        let script_c2 = ac.c7 * (p.mu - sigma + d / lh0) + lc.c8;

        Ok(Self {
            c1: mv.c1,
            c2: mv.c2,
            a3: mv.a3,
            c3: mv.c3,
            c4: mv.c4,
            c5: tc.c5,
            c6: tc.c6,
            c7: ac.c7,
            c8: lc.c8,
            b5: ac.b5,
            b6: ac.b6_at_1e9,
            b7: ac.b7,
            b8: ac.b8,
            b9: ac.b9,
            b10: lc.b10,
            b11_2mu: lc.b11_2mu,
            b11_2mu_minus_1: lc.b11_2mu_minus_1,
            b12: b12v,
            m_k_delta: m,
            omega1_half: omega1(0.5, H0, alpha),
            omega2_sigma: omega2(sigma, H0, alpha, h),
            u,
            v,
            j,
            k: kk,
            script_c1,
            script_c2,
        })
    }

    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        vec![
            ("a3", self.a3),
            ("C1", self.c1),
            ("C2", self.c2),
            ("C3", self.c3),
            ("C4", self.c4),
            ("C5", self.c5),
            ("C6", self.c6),
            ("C7", self.c7),
            ("C8", self.c8),
            ("b5", self.b5),
            ("b6", self.b6),
            ("b7", self.b7),
            ("b8", self.b8),
            ("b9", self.b9),
            ("b10", self.b10),
            ("b11_2mu", self.b11_2mu),
            ("b11_2mu_minus_1", self.b11_2mu_minus_1),
            ("b12", self.b12),
            ("M_k_delta", self.m_k_delta),
            ("omega1_half", self.omega1_half),
            ("omega2_sigma", self.omega2_sigma),
            ("J", self.j),
            ("K", self.k),
            ("U", self.u),
            ("V", self.v),
            ("scriptC1", self.script_c1),
            ("scriptC2", self.script_c2),
        ]
    }

    /// Flat `name = value` text, 17 significant digits per value.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for (name, v) in self.entries() {
            let _ = writeln!(out, "{name} = {}", fmt17(v));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn m0_radical() {
        assert!(rel(m0() * m0(), 1.0 + 2.0 / 3.0 * 1.2_f64.sqrt()) < 1e-15);
    }

    #[test]
    fn eta0_is_b6_breakdown() {
        let e0 = eta0();
        assert!((e0 - 0.23622).abs() < 1e-5, "eta0 = {e0}");
        assert!((b6(X_ARG, e0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn delta_max_value() {
        assert!((delta_max() - 26.36).abs() < 0.01);
    }

    #[test]
    fn eval_i_gaussian_moment() {
        assert!(rel(eval_i(1.0, 0, 0.5, 2.0).unwrap(), 0.5) < 1e-14);
        assert!(matches!(eval_i(-1.0, 0, 0.5, 2.0), Err(Error::Domain { .. })));
        assert!(matches!(eval_i(1.0, 3, 0.5, 2.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn a3_value() {
        let mv = mean_value_constants(1.0).unwrap();
        assert_eq!(mv.a3, -6.0 * 0.63 / E + 2.851);
        assert!(rel(mv.c1, 6.0 / (PI * PI) + 1.048 / H0.ln()) < 1e-15);
    }

    #[test]
    fn c2_decreasing_in_k() {
        let mut prev = f64::INFINITY;
        for i in 0..=50 {
            let k = K_MIN + (1.0 - K_MIN) * i as f64 / 50.0;
            let c2 = mean_value_constants(k).unwrap().c2;
            assert!(c2 < prev);
            prev = c2;
        }
    }

    #[test]
    fn m_branches() {
        assert_eq!(eval_m(1.0, 0.303), 1.0);
        let k = 1e9 / H0;
        let want = H0.ln() / (1e9_f64.ln() + 0.6);
        assert!(rel(eval_m(k, 0.3), want) < 1e-15);
        assert!((eval_m(k, 0.3) - 1.1323).abs() < 1e-4);
        // at log k + 2δ = 0 both branches give 1
        let delta = -k.ln() / 2.0;
        let first = H0.ln() / ((k * H0).ln() + 2.0 * delta);
        assert!((first - 1.0).abs() < 1e-14);
        assert!((eval_m(k, delta) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn omega_values() {
        assert!((omega1(0.5, 1e30, 0.3) - 1.0).abs() < 1e-15);
        let w2 = omega2(0.5, H0, 0.105, H0 - 1.0);
        assert!((w2 - 0.90033).abs() < 1e-5, "{w2}");
        for (s, a) in [(0.5, 0.1), (0.9, 2.0), (1.1, 0.01)] {
            assert!(omega2(s, 100.0, a, 1002.0) < omega1(s, 100.0, a));
        }
    }

    #[test]
    fn tail_constant_limits() {
        let big = tail_constants(1.0, 40.0).unwrap();
        assert!(big.c6 < 1e-17);
        let a = tail_constants(1.0, 1e-4).unwrap().c5;
        let b = tail_constants(1.0, 2e-4).unwrap().c5;
        assert!((a / b - 2.0).abs() < 1e-3);
    }

    #[test]
    fn b8_limit_and_b11_limit() {
        let ac = argument_constants(1.0, 0.3, 1e300).unwrap();
        assert!((ac.b8 - 1.0).abs() < 1e-15);
        assert!((b11(1e300, 2.5) - 1.0).abs() < 1e-2);
        assert!((b11(f64::MAX, 2.5) - 1.0) < (b11(1e10, 2.5) - 1.0));
    }

    #[test]
    fn b10_limit() {
        // -log(1-u²)/u² → 1 as u → 0: at large kH0... emulate via mu near 1.5
        let lc = log_constants(1.0, 1.49).unwrap();
        assert!(lc.b10 > 1.0 && lc.b10 < 1.0 + 1e-6, "{}", lc.b10);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(argument_constants(1.0, 0.2, H0 - 1.0), Err(Error::Domain { .. })));
        assert!(matches!(log_constants(K_MIN, 1.2), Err(Error::Domain { .. })));
        assert!(mean_value_constants(0.01).is_err());
    }

    #[test]
    fn key_value_round_trip() {
        let p = ParameterSet {
            sigma: 0.9,
            t: H0,
            k: 1.0,
            alpha: 0.105,
            delta: 0.303,
            d: 0.334,
            eta: 0.25618,
            mu: 1.245,
            h_gap: 1e-6,
        };
        let q = ParameterSet::from_key_value(&p.to_key_value()).unwrap();
        assert_eq!(p, q);
        let err = ParameterSet::from_key_value("sigma = 1\nbogus = 2\n").unwrap_err();
        assert!(err.to_string().contains("valid keys"));
        let err = ParameterSet::from_key_value("sigma = 0.9 # c\n").unwrap_err();
        assert!(err.to_string().contains("missing"));
    }
}
