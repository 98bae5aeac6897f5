//! Final bounds for N(σ, T) in logarithmic and power form.

use std::f64::consts::PI;
use std::fmt;

use crate::constants::{
    b6, delta_max, eta0, eval_k_and_v, eval_u, j_groups, powr, ConstantBundle, ParameterSet, H0,
    H_MIN, K_MIN,
};
use crate::error::{Error, Result};

/// One failed hypothesis of the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// The condition that fails, e.g. `sigma ≤ 1/2 + d/log H0`.
    pub condition: String,
    /// Where the hypothesis comes from.
    pub source: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.condition, self.source)
    }
}

const SRC_THEOREM: &str = "main theorem hypotheses";
const SRC_MEAN_SQUARE: &str = "mean-square bound on the half line";
const SRC_SIGMA2: &str = "mean-square bound at sigma2 = 1 + delta/log X";
const SRC_CONVEXITY: &str = "convexity interpolation range for delta";
const SRC_ARGUMENT: &str = "argument bound on horizontal segments";
const SRC_LOG: &str = "lower bound for log|h_X| at Re s = mu";

/// Check every hypothesis needed by the bound. An empty list means `p` is
/// admissible.
pub fn validate_params(p: &ParameterSet) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |condition: String, source: &'static str| out.push(Violation { condition, source });

    let k_ok = p.k >= K_MIN * (1.0 - 1e-12) && p.k <= 1.0;
    if !k_ok {
        fail(format!("k = {} outside [1e9/H0, 1]", p.k), SRC_THEOREM);
    }
    if !(p.d > 0.0) {
        fail(format!("d = {} must be positive", p.d), SRC_THEOREM);
    }
    let alpha_ok = p.alpha > 0.0 && p.alpha.is_finite();
    if !alpha_ok {
        fail(format!("alpha = {} must be positive", p.alpha), SRC_THEOREM);
    }
    let delta_ok = p.delta > 0.0 && p.delta < delta_max();
    if !delta_ok {
        fail(format!("delta = {} outside (0, {:.4})", p.delta, delta_max()), SRC_CONVEXITY);
    }
    let e0 = eta0();
    if !(p.eta > e0) {
        fail(format!("eta below eta0 ({} <= {e0:.6})", p.eta), SRC_ARGUMENT);
    } else if !(p.eta < 0.5) {
        fail(format!("eta = {} must be below 1/2", p.eta), SRC_ARGUMENT);
    }
    if !(p.mu >= 1.0 + e0) {
        fail(format!("mu below 1 + eta0 ({} < {:.6})", p.mu, 1.0 + e0), SRC_LOG);
    }
    if !(p.mu <= 1.0 + p.eta) {
        fail(format!("mu above 1 + eta ({} > {})", p.mu, 1.0 + p.eta), SRC_LOG);
    }
    let h = p.h();
    if !(p.h_gap >= 0.0 && h >= H_MIN) {
        fail(format!("H = {h} outside [1002, H0]"), SRC_THEOREM);
    }
    if !(p.t >= H0) {
        fail(format!("T = {} below H0", p.t), SRC_THEOREM);
    } else if !(p.t_minus_h() > 0.0) {
        fail("H must be strictly below T".to_string(), SRC_THEOREM);
    }
    if !(p.sigma > 0.5 + p.d / H0.ln()) {
        fail("sigma ≤ 1/2 + d/log H0".to_string(), SRC_THEOREM);
    }
    if !(p.sigma < 1.0) {
        fail(format!("sigma = {} must be below 1", p.sigma), SRC_THEOREM);
    }
    if k_ok && alpha_ok {
        match eval_u(p.alpha, p.k, H0) {
            Ok(u) if u > 1.0 => {}
            Ok(u) => fail(format!("U(alpha, k, H0) = {u} must exceed 1"), SRC_MEAN_SQUARE),
            Err(e) => fail(format!("U(alpha, k, H0) not computable: {e}"), SRC_MEAN_SQUARE),
        }
        match j_groups(p.k, H0, p.alpha) {
            Ok(groups) => {
                for (i, g) in groups.iter().enumerate() {
                    if !(*g > 0.0) {
                        fail(format!("J coefficient group {} = {g} is not positive", i + 1), SRC_MEAN_SQUARE);
                    }
                }
            }
            Err(e) => fail(format!("J not computable: {e}"), SRC_MEAN_SQUARE),
        }
        if delta_ok {
            match eval_k_and_v(p.alpha, p.k, p.delta, H0) {
                Ok((_, v)) if v > 1.0 => {}
                Ok((_, v)) => fail(format!("V(alpha, k, delta, H0) = {v} must exceed 1"), SRC_SIGMA2),
                Err(e) => fail(format!("V not computable: {e}"), SRC_SIGMA2),
            }
        }
    }
    if k_ok && p.mu > 1.0 {
        let u = b6(p.k * H0, p.mu - 1.0);
        if !(u < 1.0) {
            fail(format!("b6(kH0, mu - 1) = {u} must be below 1"), SRC_LOG);
        }
    }
    out
}

/// Informational notes that do not invalidate `p`.
pub fn advisories(p: &ParameterSet) -> Vec<String> {
    let mut notes = Vec::new();
    if p.delta < 1.0 {
        notes.push(format!(
            "delta = {} < 1: accepted on the range 0 < delta < {:.2} used by the convexity step",
            p.delta,
            delta_max()
        ));
    }
    notes
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundForm {
    /// (T-H) log T/(2πd) · log(1 + 𝒞₁ P/(T-H)) + B (log T)².
    LogForm,
    /// A (log kT)^{2σ} (log T)^{5-4σ} T^{8(1-σ)/3} + B (log T)².
    PowerForm,
}

impl fmt::Display for BoundForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundForm::LogForm => "log",
            BoundForm::PowerForm => "power",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub form: BoundForm,
    /// 𝒞₁ / (2πd)
    pub a: f64,
    /// 𝒞₂ / (2πd)
    pub b: f64,
    pub value: f64,
    pub params: ParameterSet,
    pub notes: Vec<String>,
}

impl BoundResult {
    pub fn to_key_value(&self) -> String {
        use crate::constants::fmt17;
        format!(
            "form = {}\nA = {}\nB = {}\nvalue = {}\n",
            self.form,
            fmt17(self.a),
            fmt17(self.b),
            fmt17(self.value)
        )
    }
}

/// (log kT)^{2σ} (log T)^{4(1-σ)} T^{8(1-σ)/3}
fn growth_factor(p: &ParameterSet) -> f64 {
    let lt = p.t.ln();
    let lkt = (p.k * p.t).ln();
    powr(lkt, 2.0 * p.sigma) * powr(lt, 4.0 * (1.0 - p.sigma)) * powr(p.t, 8.0 / 3.0 * (1.0 - p.sigma))
}

fn checked(p: &ParameterSet) -> Result<ConstantBundle> {
    let v = validate_params(p);
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    ConstantBundle::evaluate(p)
}

pub fn bound_log_form(p: &ParameterSet) -> Result<BoundResult> {
    let c = checked(p)?;
    Ok(log_form_from(p, &c))
}

pub fn bound_power_form(p: &ParameterSet) -> Result<BoundResult> {
    let c = checked(p)?;
    Ok(power_form_from(p, &c))
}

pub(crate) fn log_form_from(p: &ParameterSet, c: &ConstantBundle) -> BoundResult {
    let two_pi_d = 2.0 * PI * p.d;
    let lt = p.t.ln();
    let gap = p.t_minus_h();
    let main = gap * lt / two_pi_d * (c.script_c1 * growth_factor(p) / gap).ln_1p();
    let b = c.script_c2 / two_pi_d;
    BoundResult {
        form: BoundForm::LogForm,
        a: c.script_c1 / two_pi_d,
        b,
        value: main + b * lt * lt,
        params: *p,
        notes: advisories(p),
    }
}

pub(crate) fn power_form_from(p: &ParameterSet, c: &ConstantBundle) -> BoundResult {
    let two_pi_d = 2.0 * PI * p.d;
    let lt = p.t.ln();
    let a = c.script_c1 / two_pi_d;
    let b = c.script_c2 / two_pi_d;
    BoundResult {
        form: BoundForm::PowerForm,
        a,
        b,
        value: a * growth_factor(p) * lt + b * lt * lt,
        params: *p,
        notes: advisories(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::table1_params;

    #[test]
    fn table1_row_is_valid() {
        let p = table1_params(0.90).unwrap();
        assert!(validate_params(&p).is_empty(), "{:?}", validate_params(&p));
    }

    #[test]
    fn sigma_too_small() {
        let mut p = table1_params(0.90).unwrap();
        p.sigma = 0.51;
        let v = validate_params(&p);
        assert!(v.iter().any(|x| x.condition == "sigma ≤ 1/2 + d/log H0"), "{v:?}");
    }

    #[test]
    fn eta_too_small() {
        let mut p = table1_params(0.90).unwrap();
        p.eta = 0.2;
        let v = validate_params(&p);
        assert!(v.iter().any(|x| x.condition.starts_with("eta below eta0")), "{v:?}");
    }

    #[test]
    fn validation_error_carries_list() {
        let mut p = table1_params(0.90).unwrap();
        p.k = 2.0;
        p.alpha = -1.0;
        match bound_power_form(&p) {
            Err(Error::Validation(v)) => assert!(v.len() >= 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_delta_is_annotated() {
        let p = table1_params(0.90).unwrap();
        assert_eq!(advisories(&p).len(), 1);
        let r = bound_power_form(&p).unwrap();
        assert!(r.notes[0].contains("delta"));
    }

    #[test]
    fn nan_input_does_not_panic() {
        let mut p = table1_params(0.90).unwrap();
        p.alpha = f64::NAN;
        p.k = f64::NAN;
        assert!(!validate_params(&p).is_empty());
    }
}
