//! Brute-force and quadrature oracles for the inequalities behind the
//! constants.
//!
//! Every check returns [`LemmaReport`]s. A report with a `caveat` was run
//! outside the range where the inequality is stated and is supporting
//! evidence only.

pub mod analytic;
pub mod arithmetic;
pub mod quadrature;
pub mod sums;

use std::fmt::Write as _;

pub use analytic::{
    check_mv_inequality, check_smoothing_and_convexity, check_weight_bounds, check_zeta_bounds,
    convexity_exponents, random_mv_sequence, weight_g,
};
pub use arithmetic::{build_tables, ArithmeticTables};
pub use quadrature::{integrate, moment_integral_quadrature, QuadResult};
pub use sums::{check_divisor_sums, check_lambda_sums, check_mobius_sums};

/// Partial sums of d(n) and d(n)² are taken up to this index before the
/// tail majorant takes over.
pub const DIVISOR_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub lemma_id: &'static str,
    pub instance: String,
    pub lhs: f64,
    pub rhs: f64,
    /// rhs - lhs
    pub margin: f64,
    pub pass: bool,
    pub caveat: Option<String>,
}

impl LemmaReport {
    pub fn new(lemma_id: &'static str, instance: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let margin = rhs - lhs;
        LemmaReport {
            lemma_id,
            instance: instance.into(),
            lhs,
            rhs,
            margin,
            pass: margin >= 0.0,
            caveat: None,
        }
    }

    pub fn with_caveat(mut self, caveat: Option<String>) -> Self {
        self.caveat = caveat;
        self
    }

    pub fn in_hypothesis(&self) -> bool {
        self.caveat.is_none()
    }

    /// True when the report counts as a failure: it is inside the stated
    /// range and the inequality does not hold.
    pub fn is_regression(&self) -> bool {
        self.in_hypothesis() && !self.pass
    }

    fn status(&self) -> &'static str {
        match (self.pass, self.in_hypothesis()) {
            (true, true) => "pass",
            (true, false) => "pass*",
            (false, true) => "FAIL",
            (false, false) => "fail*",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Csv,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Aligned text (statuses ending in `*` carry a caveat) or CSV.
pub fn render_reports(reports: &[LemmaReport], format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str("lemma_id,instance,lhs,rhs,margin,pass,caveat\n");
            for r in reports {
                let _ = writeln!(
                    out,
                    "{},{},{:.16e},{:.16e},{:.16e},{},{}",
                    r.lemma_id,
                    csv_field(&r.instance),
                    r.lhs,
                    r.rhs,
                    r.margin,
                    r.pass,
                    csv_field(r.caveat.as_deref().unwrap_or(""))
                );
            }
        }
        ReportFormat::Text => {
            let id_w = reports.iter().map(|r| r.lemma_id.len()).max().unwrap_or(0).max(5);
            let inst_w = reports.iter().map(|r| r.instance.chars().count()).max().unwrap_or(0).max(8);
            let _ = writeln!(
                out,
                "{:<id_w$}  {:<inst_w$}  {:>23}  {:>23}  {:>11}  status",
                "lemma", "instance", "lhs", "rhs", "margin"
            );
            for r in reports {
                let pad = inst_w - r.instance.chars().count();
                let _ = writeln!(
                    out,
                    "{:<id_w$}  {}{}  {:>23.16e}  {:>23.16e}  {:>11.3e}  {}",
                    r.lemma_id,
                    r.instance,
                    " ".repeat(pad),
                    r.lhs,
                    r.rhs,
                    r.margin,
                    r.status()
                );
            }
            let notes: Vec<_> = reports.iter().filter_map(|r| r.caveat.as_deref()).collect();
            if !notes.is_empty() {
                let mut seen = Vec::new();
                for n in notes {
                    if !seen.contains(&n) {
                        seen.push(n);
                    }
                }
                out.push('\n');
                for n in seen {
                    let _ = writeln!(out, "* {n}");
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
    fn pass_iff_margin_nonnegative() {
        assert!(LemmaReport::new("x", "", 1.0, 1.0).pass);
        assert!(!LemmaReport::new("x", "", 1.0 + 1e-15, 1.0).pass);
        let r = LemmaReport::new("x", "", 2.0, 1.0).with_caveat(Some("small X".into()));
        assert!(!r.is_regression());
    }

    #[test]
    fn csv_quotes_commas() {
        let r = LemmaReport::new("id", "a, b", 1.0, 2.0);
        let s = render_reports(&[r], ReportFormat::Csv);
        assert!(s.lines().nth(1).unwrap().starts_with("id,\"a, b\","));
    }
}
