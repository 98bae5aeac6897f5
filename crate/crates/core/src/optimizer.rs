//! Deterministic parameter search for the smallest bound coefficients.
//!
//! The search follows two stages. For each `(k, H)` the pair `(η, μ)` is fixed
//! by one-dimensional golden-section minimisation of `C7` and `μ·C7 + C8`.
//! The remaining parameters `(k, α, δ, d)` are then scanned on a coarse grid
//! and refined inside a shrinking box around the incumbent.

use std::cmp::Ordering;
use std::collections::HashMap;

use rayon::prelude::*;

use crate::bounds::{log_form_from, power_form_from, validate_params, BoundResult};
use crate::constants::{
    argument_constants, delta_max, eta0, log_constants, parse_key_value, ConstantBundle,
    ParameterSet, H0, H_MIN, K_MIN,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Smallest A = 𝒞₁/(2πd) of the power form.
    MinA,
    /// Smallest log-form bound at T = H0.
    MinBoundAtH0,
}

/// Inclusive range sampled at `steps` equally spaced points. A degenerate
/// range (`lo == hi`) pins the parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(lo: f64, hi: f64, steps: usize) -> Self {
        Range { lo, hi, steps }
    }

    pub fn fixed(v: f64) -> Self {
        Range { lo: v, hi: v, steps: 2 }
    }

    fn is_fixed(&self) -> bool {
        self.lo == self.hi
    }

    fn spacing(&self) -> f64 {
        if self.is_fixed() {
            0.0
        } else {
            (self.hi - self.lo) / (self.steps - 1) as f64
        }
    }

    fn values(&self) -> Vec<f64> {
        linspace(self.lo, self.hi, if self.is_fixed() { 1 } else { self.steps })
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || lo == hi {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub objective: Objective,
    pub k: Range,
    pub alpha: Range,
    pub delta: Range,
    pub d: Range,
    /// Candidate values of H0 - H. Only the first is used unless
    /// `search_h` is set.
    pub h_gaps: Vec<f64>,
    pub search_h: bool,
    pub refine_rounds: usize,
    pub refine_steps: usize,
    /// Upper limit on objective evaluations per σ.
    pub max_evals: usize,
}

const DEFAULT_MAX_EVALS: usize = 100_000;

impl SearchConfig {
    /// Minimise A with H = H0 - 1.
    pub fn table1() -> Self {
        SearchConfig {
            objective: Objective::MinA,
            k: Range::new(0.2, 1.0, 9),
            alpha: Range::new(0.02, 0.6, 16),
            delta: Range::new(0.05, 1.5, 12),
            d: Range::new(0.05, 1.5, 16),
            h_gaps: vec![1.0],
            search_h: false,
            refine_rounds: 5,
            refine_steps: 5,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }

    /// Minimise the log-form bound at T = H0 with H = H0 - 1e-6.
    pub fn table2() -> Self {
        SearchConfig {
            objective: Objective::MinBoundAtH0,
            k: Range::new(0.2, 1.0, 9),
            alpha: Range::new(0.02, 0.6, 16),
            delta: Range::new(0.05, 1.5, 12),
            d: Range::new(0.05, 12.0, 16),
            h_gaps: vec![1e-6],
            search_h: false,
            refine_rounds: 5,
            refine_steps: 5,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }

    /// Replace the pinned H by a log-spaced scan over [1002, H0).
    pub fn with_h_search(mut self) -> Self {
        let first = self.h_gaps[0];
        let mut gaps = vec![first];
        let mut g = 1e-6;
        while g < H0 - H_MIN {
            if g != first {
                gaps.push(g);
            }
            g *= 1e3;
        }
        self.h_gaps = gaps;
        self.search_h = true;
        self
    }

    /// Override fields from `name = value` text. Ranges are written as
    /// `lo, hi, steps`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (key, value) in parse_key_value(text)? {
            match key.as_str() {
                "k" => self.k = parse_range(&key, &value)?,
                "alpha" => self.alpha = parse_range(&key, &value)?,
                "delta" => self.delta = parse_range(&key, &value)?,
                "d" => self.d = parse_range(&key, &value)?,
                "refine_rounds" => self.refine_rounds = parse_usize(&key, &value)?,
                "refine_steps" => self.refine_steps = parse_usize(&key, &value)?,
                "max_evals" => self.max_evals = parse_usize(&key, &value)?,
                "search_h" => match value.as_str() {
                    "true" => *self = self.clone().with_h_search(),
                    "false" => {
                        self.search_h = false;
                        self.h_gaps.truncate(1);
                    }
                    _ => return Err(Error::Parse(format!("search_h must be true or false, got `{value}`"))),
                },
                "H0_minus_H" => {
                    let v: f64 = value.parse().map_err(|_| Error::Parse(format!("bad number `{value}` for {key}")))?;
                    self.h_gaps = vec![v];
                    self.search_h = false;
                }
                _ => {
                    return Err(Error::Parse(format!(
                        "unknown search key `{key}`; valid keys: k, alpha, delta, d, refine_rounds, refine_steps, max_evals, search_h, H0_minus_H"
                    )))
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let check = |name: &str, r: &Range, lo_ok: &dyn Fn(f64) -> bool, hi_ok: &dyn Fn(f64) -> bool| {
            if !(r.lo.is_finite() && r.hi.is_finite() && r.lo <= r.hi) {
                return Err(Error::Parse(format!("{name}: need finite lo <= hi, got [{}, {}]", r.lo, r.hi)));
            }
            if r.steps < 2 {
                return Err(Error::Parse(format!("{name}: resolution must be at least 2")));
            }
            if !lo_ok(r.lo) || !hi_ok(r.hi) {
                return Err(Error::Parse(format!("{name}: range [{}, {}] leaves the valid region", r.lo, r.hi)));
            }
            Ok(())
        };
        check("k", &self.k, &|v| v >= K_MIN * (1.0 - 1e-12), &|v| v <= 1.0)?;
        check("alpha", &self.alpha, &|v| v > 0.0, &|_| true)?;
        check("delta", &self.delta, &|v| v > 0.0, &|v| v < delta_max())?;
        check("d", &self.d, &|v| v > 0.0, &|_| true)?;
        if self.refine_steps < 2 {
            return Err(Error::Parse("refine_steps must be at least 2".into()));
        }
        if self.h_gaps.is_empty() || self.h_gaps.iter().any(|g| !(*g >= 0.0 && H0 - g >= H_MIN)) {
            return Err(Error::Parse("H0 - H must keep H in [1002, H0]".into()));
        }
        Ok(())
    }

    fn h_candidates(&self) -> &[f64] {
        if self.search_h {
            &self.h_gaps
        } else {
            &self.h_gaps[..1]
        }
    }
}

fn parse_range(key: &str, value: &str) -> Result<Range> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    let bad = || Error::Parse(format!("{key} expects `lo, hi, steps`, got `{value}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].parse().map_err(|_| bad())?;
    let hi = parts[1].parse().map_err(|_| bad())?;
    let steps = parts[2].parse().map_err(|_| bad())?;
    Ok(Range::new(lo, hi, steps))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::Parse(format!("{key} expects a non-negative integer, got `{value}`")))
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimum of a unimodal `f` on the open interval (lo, hi).
fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        x1
    } else {
        x2
    }
}

const ETA_MU_TOL: f64 = 1e-6;

/// η minimising C7(η, H), then μ minimising μ·C7 + C8(k, μ) on
/// [1 + η0, 1 + η]. Points where a constant is undefined count as +∞.
pub fn minimize_eta_mu(k: f64, h: f64) -> Result<(f64, f64)> {
    if !(H_MIN..=H0).contains(&h) {
        return Err(Error::domain("minimize_eta_mu", format!("H = {h} outside [1002, H0]")));
    }
    if !(K_MIN * (1.0 - 1e-12)..=1.0).contains(&k) {
        return Err(Error::domain("minimize_eta_mu", format!("k = {k} outside [1e9/H0, 1]")));
    }
    let c7 = |eta: f64| argument_constants(k, eta, h).map(|a| a.c7).unwrap_or(f64::INFINITY);
    let e0 = eta0();
    let eta = golden_section(c7, e0, 0.5, ETA_MU_TOL);
    let c7_at = argument_constants(k, eta, h)?.c7;
    let g = |mu: f64| match log_constants(k, mu) {
        Ok(l) => mu * c7_at + l.c8,
        Err(_) => f64::INFINITY,
    };
    let mu = golden_section(g, 1.0 + e0, 1.0 + eta, ETA_MU_TOL);
    log_constants(k, mu)?;
    Ok((eta, mu))
}

/// Coordinates of a candidate in search order.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    k: f64,
    alpha: f64,
    delta: f64,
    d: f64,
    h_gap: f64,
}

impl Point {
    fn key(&self) -> [f64; 5] {
        [self.k, self.alpha, self.delta, self.d, self.h_gap]
    }
}

#[derive(Debug, Clone, Copy)]
struct Scored {
    value: f64,
    point: Point,
}

/// Total order: objective first, then the lexicographically smaller vector.
fn better(a: &Scored, b: &Scored) -> Ordering {
    a.value.total_cmp(&b.value).then_with(|| {
        a.point
            .key()
            .iter()
            .zip(b.point.key().iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    })
}

struct Evaluator<'a> {
    sigma: f64,
    cfg: &'a SearchConfig,
    eta_mu: HashMap<(u64, u64), (f64, f64)>,
    evaluations: usize,
}

impl<'a> Evaluator<'a> {
    fn params(&self, pt: &Point) -> Option<ParameterSet> {
        let &(eta, mu) = self.eta_mu.get(&(pt.k.to_bits(), pt.h_gap.to_bits()))?;
        Some(ParameterSet {
            sigma: self.sigma,
            t: H0,
            k: pt.k,
            alpha: pt.alpha,
            delta: pt.delta,
            d: pt.d,
            eta,
            mu,
            h_gap: pt.h_gap,
        })
    }

    fn objective(&self, pt: &Point) -> f64 {
        let Some(p) = self.params(pt) else {
            return f64::INFINITY;
        };
        if !validate_params(&p).is_empty() {
            return f64::INFINITY;
        }
        let Ok(c) = ConstantBundle::evaluate(&p) else {
            return f64::INFINITY;
        };
        let v = match self.cfg.objective {
            Objective::MinA => power_form_from(&p, &c).a,
            Objective::MinBoundAtH0 => log_form_from(&p, &c).value,
        };
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    }

    /// Evaluate every point and return the best one (None if all invalid).
    fn best_of(&mut self, points: Vec<Point>) -> Result<Option<Scored>> {
        if self.evaluations + points.len() > self.cfg.max_evals {
            return Err(Error::Budget(format!(
                "search needs more than {} objective evaluations",
                self.cfg.max_evals
            )));
        }
        self.evaluations += points.len();
        let mut missing: Vec<(u64, u64)> = points
            .iter()
            .map(|p| (p.k.to_bits(), p.h_gap.to_bits()))
            .filter(|key| !self.eta_mu.contains_key(key))
            .collect();
        missing.sort_unstable();
        missing.dedup();
        let solved: Vec<_> = missing
            .par_iter()
            .filter_map(|&(kb, hb)| {
                let h = H0 - f64::from_bits(hb);
                // unusable k values are left out and score +inf
                minimize_eta_mu(f64::from_bits(kb), h).ok().map(|em| ((kb, hb), em))
            })
            .collect();
        self.eta_mu.extend(solved);
        let this = &*self;
        let best = points
            .par_iter()
            .map(|pt| Scored { value: this.objective(pt), point: *pt })
            .min_by(better);
        Ok(best.filter(|s| s.value.is_finite()))
    }
}

/// Progress of a search, one entry per stage.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    /// Best objective after the coarse grid and after each refinement round.
    pub history: Vec<f64>,
    pub evaluations: usize,
}

pub fn minimize(sigma: f64, cfg: &SearchConfig) -> Result<(ParameterSet, BoundResult)> {
    minimize_traced(sigma, cfg).map(|(p, r, _)| (p, r))
}

pub fn minimize_traced(sigma: f64, cfg: &SearchConfig) -> Result<(ParameterSet, BoundResult, SearchTrace)> {
    if !(sigma > 0.5 && sigma < 1.0) {
        return Err(Error::domain("minimize", format!("sigma = {sigma} outside (1/2, 1)")));
    }
    cfg.validate()?;
    let d_cap = (sigma - 0.5) * H0.ln() * (1.0 - 1e-9);
    if cfg.d.lo >= d_cap {
        return Err(Error::NoValidPoint);
    }
    let d_range = Range { hi: cfg.d.hi.min(d_cap), ..cfg.d };
    let ranges = [cfg.k, cfg.alpha, cfg.delta, d_range];

    let mut ev = Evaluator { sigma, cfg, eta_mu: HashMap::new(), evaluations: 0 };
    let axes: Vec<Vec<f64>> = ranges.iter().map(Range::values).collect();
    let grid = product(&axes, cfg.h_candidates());
    let mut best = ev.best_of(grid)?.ok_or(Error::NoValidPoint)?;
    let mut history = vec![best.value];

    let mut width: Vec<f64> = ranges.iter().map(Range::spacing).collect();
    for _ in 0..cfg.refine_rounds {
        let c = best.point;
        let centre = [c.k, c.alpha, c.delta, c.d];
        let local: Vec<Vec<f64>> = (0..4)
            .map(|i| {
                let r = &ranges[i];
                if r.is_fixed() {
                    vec![r.lo]
                } else {
                    let lo = (centre[i] - width[i]).max(r.lo);
                    let hi = (centre[i] + width[i]).min(r.hi);
                    linspace(lo, hi, cfg.refine_steps)
                }
            })
            .collect();
        if let Some(s) = ev.best_of(product(&local, &[c.h_gap]))? {
            if better(&s, &best) == Ordering::Less {
                best = s;
            }
        }
        history.push(best.value);
        for w in &mut width {
            *w *= 0.5;
        }
    }

    let p = ev.params(&best.point).ok_or(Error::NoValidPoint)?;
    let bundle = ConstantBundle::evaluate(&p)?;
    let result = match cfg.objective {
        Objective::MinA => power_form_from(&p, &bundle),
        Objective::MinBoundAtH0 => log_form_from(&p, &bundle),
    };
    Ok((p, result, SearchTrace { history, evaluations: ev.evaluations }))
}

fn product(axes: &[Vec<f64>], h_gaps: &[f64]) -> Vec<Point> {
    let mut out = Vec::with_capacity(axes.iter().map(Vec::len).product::<usize>() * h_gaps.len());
    for &k in &axes[0] {
        for &alpha in &axes[1] {
            for &delta in &axes[2] {
                for &d in &axes[3] {
                    for &h_gap in h_gaps {
                        out.push(Point { k, alpha, delta, d, h_gap });
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let x = golden_section(|x| (x - 0.3).powi(2), 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-8);
    }

    #[test]
    fn linspace_hits_endpoints() {
        let v = linspace(0.1, 0.7, 4);
        assert_eq!(v.len(), 4);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[3], 0.7);
        assert_eq!(linspace(0.5, 0.5, 7), vec![0.5]);
    }

    #[test]
    fn tie_break_prefers_smaller_vector() {
        let p = |k| Point { k, alpha: 0.1, delta: 0.3, d: 0.3, h_gap: 1.0 };
        let a = Scored { value: 1.0, point: p(0.5) };
        let b = Scored { value: 1.0, point: p(0.6) };
        assert_eq!(better(&a, &b), Ordering::Less);
        assert_eq!(better(&b, &a), Ordering::Greater);
    }

    #[test]
    fn bad_config_rejected() {
        let mut cfg = SearchConfig::table1();
        cfg.alpha.steps = 1;
        assert!(minimize(0.9, &cfg).is_err());
        let mut cfg = SearchConfig::table1();
        assert!(cfg.apply_text("gamma = 1, 2, 3").is_err());
        assert!(cfg.apply_text("alpha = 0.1, 0.2").is_err());
        cfg.apply_text("alpha = 0.1, 0.2, 3\nrefine_rounds = 2").unwrap();
        assert_eq!(cfg.alpha, Range::new(0.1, 0.2, 3));
        assert_eq!(cfg.refine_rounds, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let mut cfg = SearchConfig::table1();
        cfg.max_evals = 100;
        assert!(matches!(minimize(0.9, &cfg), Err(Error::Budget(_))));
    }

    #[test]
    fn d_above_cap_has_no_valid_point() {
        let mut cfg = SearchConfig::table1();
        cfg.d = Range::new(5.0, 6.0, 3);
        assert!(matches!(minimize(0.6, &cfg), Err(Error::NoValidPoint)));
    }

    #[test]
    fn eta_mu_at_table1_height() {
        let (eta, mu) = minimize_eta_mu(1.0, H0 - 1.0).unwrap();
        assert!((eta - 0.25618).abs() < 1e-4, "{eta}");
        assert!((mu - 1.245).abs() < 1e-3, "{mu}");
    }
}
