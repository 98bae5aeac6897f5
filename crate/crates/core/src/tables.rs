//! Published parameter rows and table rendering.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{log_form_from, power_form_from, validate_params};
use crate::constants::{fmt17, ConstantBundle, ParameterSet, H0};
use crate::error::{Error, Result};
use crate::optimizer::{minimize, SearchConfig};

/// A row of the power-form table as published.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Published {
    pub sigma: f64,
    pub k: f64,
    pub mu: f64,
    pub alpha: f64,
    pub delta: f64,
    pub d: f64,
    pub a: f64,
    pub b: f64,
}

/// A row of the log-form table at T = H0 as published.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Published {
    pub sigma: f64,
    pub d: f64,
    pub inv_2pid: f64,
    pub script_c1: f64,
    pub b: f64,
    pub bound: f64,
}

macro_rules! t1 {
    ($($s:expr, $k:expr, $mu:expr, $al:expr, $de:expr, $d:expr, $a:expr, $b:expr;)*) => {
        [$(Table1Published { sigma: $s, k: $k, mu: $mu, alpha: $al, delta: $de, d: $d, a: $a, b: $b }),*]
    };
}

macro_rules! t2 {
    ($($s:expr, $d:expr, $inv:expr, $c1:expr, $b:expr, $n:expr;)*) => {
        [$(Table2Published { sigma: $s, d: $d, inv_2pid: $inv, script_c1: $c1, b: $b, bound: $n }),*]
    };
}

pub const TABLE1: [Table1Published; 20] = t1![
    0.60, 0.5, 1.251, 0.288, 0.3140, 0.341, 2.177, 5.663;
    0.65, 0.6, 1.249, 0.256, 0.3070, 0.340, 2.963, 5.249;
    0.70, 0.8, 1.247, 0.222, 0.3040, 0.339, 3.983, 4.824;
    0.75, 1.0, 1.245, 0.189, 0.3030, 0.338, 5.277, 4.403;
    0.80, 1.0, 1.245, 0.160, 0.3030, 0.337, 6.918, 3.997;
    0.85, 1.0, 1.245, 0.133, 0.3030, 0.336, 8.975, 3.588;
    0.86, 1.0, 1.245, 0.127, 0.3030, 0.335, 9.441, 3.514;
    0.87, 1.0, 1.245, 0.122, 0.3030, 0.335, 9.926, 3.430;
    0.88, 1.0, 1.245, 0.116, 0.3030, 0.335, 10.431, 3.346;
    0.89, 1.0, 1.245, 0.111, 0.3030, 0.335, 10.955, 3.262;
    0.90, 1.0, 1.245, 0.105, 0.3030, 0.334, 11.499, 3.186;
    0.91, 1.0, 1.245, 0.100, 0.3030, 0.334, 12.063, 3.102;
    0.92, 1.0, 1.245, 0.095, 0.3030, 0.334, 12.646, 3.017;
    0.93, 1.0, 1.245, 0.089, 0.3030, 0.333, 13.250, 2.941;
    0.94, 1.0, 1.245, 0.084, 0.3030, 0.333, 13.872, 2.856;
    0.95, 1.0, 1.245, 0.079, 0.3030, 0.333, 14.513, 2.772;
    0.96, 1.0, 1.245, 0.074, 0.3030, 0.332, 15.173, 2.694;
    0.97, 1.0, 1.245, 0.069, 0.3030, 0.332, 15.850, 2.609;
    0.98, 1.0, 1.245, 0.064, 0.3030, 0.331, 16.544, 2.532;
    0.99, 1.0, 1.245, 0.060, 0.3030, 0.331, 17.253, 2.446;
];

pub const TABLE2: [Table2Published; 20] = t2![
    0.60, 2.414, 0.066, 2094.73, 0.893, 520.28;
    0.65, 3.621, 0.044, 97986.60, 0.595, 346.85;
    0.70, 4.828, 0.033, 4583580.34, 0.447, 260.14;
    0.75, 6.036, 0.027, 214409007.32, 0.357, 208.11;
    0.80, 7.243, 0.022, 10029544375.44, 0.298, 173.42;
    0.85, 8.450, 0.019, 469158276689.92, 0.255, 148.65;
    0.86, 8.691, 0.019, 1012341447042.27, 0.248, 144.52;
    0.87, 8.933, 0.018, 2184412502812.95, 0.242, 140.61;
    0.88, 9.174, 0.018, 4713486735514.76, 0.235, 136.91;
    0.89, 9.416, 0.017, 10_170_678_467_214.4, 0.229, 133.40;
    0.90, 9.657, 0.017, 21946110446020.33, 0.224, 130.07;
    0.91, 9.899, 0.017, 47354929689448.17, 0.218, 126.90;
    0.92, 10.140, 0.016, 102181631292174.11, 0.213, 123.88;
    0.93, 10.382, 0.016, 220_485_720_114_084.4, 0.208, 120.99;
    0.94, 10.623, 0.015, 475760194464125.94, 0.203, 118.24;
    0.95, 10.864, 0.015, 1_026_586_948_666_903.9, 0.199, 115.62;
    0.96, 11.106, 0.015, 2_215_151_194_732_183.3, 0.195, 113.10;
    0.97, 11.347, 0.015, 4779814142285142.58, 0.190, 110.70;
    0.98, 11.589, 0.014, 10313798574616601.14, 0.186, 108.39;
    0.99, 11.830, 0.014, 22254932487167323.15, 0.183, 106.18;
];

/// η used with the power-form rows (the minimiser of C7 at H = H0 - 1).
pub const TABLE1_ETA: f64 = 0.25618;
pub const TABLE1_H_GAP: f64 = 1.0;
pub const TABLE2_K: f64 = 1.0;
pub const TABLE2_ALPHA: f64 = 0.324;
pub const TABLE2_DELTA: f64 = 0.3;
pub const TABLE2_ETA: f64 = 0.2561;
pub const TABLE2_MU: f64 = 1.2453;
pub const TABLE2_H_GAP: f64 = 1e-6;

fn same_sigma(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-9
}

pub fn table1_row(sigma: f64) -> Option<&'static Table1Published> {
    TABLE1.iter().find(|r| same_sigma(r.sigma, sigma))
}

pub fn table2_row(sigma: f64) -> Option<&'static Table2Published> {
    TABLE2.iter().find(|r| same_sigma(r.sigma, sigma))
}

fn unknown_sigma(which: u8, sigma: f64) -> Error {
    Error::Parse(format!("sigma = {sigma} is not a row of table {which}"))
}

/// Published power-form parameters for `sigma`, at T = H0.
pub fn table1_params(sigma: f64) -> Result<ParameterSet> {
    let r = table1_row(sigma).ok_or_else(|| unknown_sigma(1, sigma))?;
    Ok(ParameterSet {
        sigma: r.sigma,
        t: H0,
        k: r.k,
        alpha: r.alpha,
        delta: r.delta,
        d: r.d,
        eta: TABLE1_ETA,
        mu: r.mu,
        h_gap: TABLE1_H_GAP,
    })
}

/// Published log-form parameters for `sigma`, at T = H0.
pub fn table2_params(sigma: f64) -> Result<ParameterSet> {
    let r = table2_row(sigma).ok_or_else(|| unknown_sigma(2, sigma))?;
    Ok(ParameterSet {
        sigma: r.sigma,
        t: H0,
        k: TABLE2_K,
        alpha: TABLE2_ALPHA,
        delta: TABLE2_DELTA,
        d: r.d,
        eta: TABLE2_ETA,
        mu: TABLE2_MU,
        h_gap: TABLE2_H_GAP,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichTable {
    One,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamsSource {
    Published,
    Optimizer,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub sigma: f64,
    pub k: f64,
    pub mu: f64,
    pub alpha: f64,
    pub delta: f64,
    pub d: f64,
    pub a: f64,
    pub b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Row {
    pub sigma: f64,
    pub d: f64,
    pub inv_2pid: f64,
    pub script_c1: f64,
    pub b: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableRow {
    One(Table1Row),
    Two(Table2Row),
}

pub const TABLE1_HEADER: [&str; 8] = ["sigma_0", "k", "mu", "alpha", "delta", "d", "A=C1/(2pi d)", "B=C2/(2pi d)"];
pub const TABLE2_HEADER: [&str; 6] = ["sigma", "d", "1/(2pi d)", "C1", "C2/(2pi d)", "N(sigma;H0)"];
const TABLE1_DECIMALS: [usize; 8] = [2, 1, 3, 3, 4, 3, 3, 3];
const TABLE2_DECIMALS: [usize; 6] = [2, 3, 3, 2, 3, 2];

impl TableRow {
    pub fn values(&self) -> Vec<f64> {
        match self {
            TableRow::One(r) => vec![r.sigma, r.k, r.mu, r.alpha, r.delta, r.d, r.a, r.b],
            TableRow::Two(r) => vec![r.sigma, r.d, r.inv_2pid, r.script_c1, r.b, r.bound],
        }
    }

    fn which(&self) -> WhichTable {
        match self {
            TableRow::One(_) => WhichTable::One,
            TableRow::Two(_) => WhichTable::Two,
        }
    }

    fn from_values(which: WhichTable, v: &[f64]) -> Result<Self> {
        match (which, v) {
            (WhichTable::One, &[sigma, k, mu, alpha, delta, d, a, b]) => {
                Ok(TableRow::One(Table1Row { sigma, k, mu, alpha, delta, d, a, b }))
            }
            (WhichTable::Two, &[sigma, d, inv_2pid, script_c1, b, bound]) => {
                Ok(TableRow::Two(Table2Row { sigma, d, inv_2pid, script_c1, b, bound }))
            }
            _ => Err(Error::Parse(format!("wrong number of columns: {}", v.len()))),
        }
    }
}

fn row_from_params(which: WhichTable, p: &ParameterSet) -> Result<TableRow> {
    let v = validate_params(p);
    if !v.is_empty() {
        return Err(Error::Validation(v));
    }
    let c = ConstantBundle::evaluate(p)?;
    Ok(match which {
        WhichTable::One => {
            let r = power_form_from(p, &c);
            TableRow::One(Table1Row {
                sigma: p.sigma,
                k: p.k,
                mu: p.mu,
                alpha: p.alpha,
                delta: p.delta,
                d: p.d,
                a: r.a,
                b: r.b,
            })
        }
        WhichTable::Two => {
            let r = log_form_from(p, &c);
            TableRow::Two(Table2Row {
                sigma: p.sigma,
                d: p.d,
                inv_2pid: 1.0 / (2.0 * PI * p.d),
                script_c1: c.script_c1,
                b: r.b,
                bound: r.value,
            })
        }
    })
}

/// One row per σ, evaluated concurrently and returned in input order.
pub fn emit_table(which: WhichTable, sigmas: &[f64], source: ParamsSource) -> Result<Vec<TableRow>> {
    if let Some(bad) = sigmas.iter().find(|s| !(**s > 0.5 && **s < 1.0)) {
        return Err(Error::domain("emit_table", format!("sigma = {bad} outside (1/2, 1)")));
    }
    sigmas
        .par_iter()
        .map(|&sigma| {
            let p = match (which, source) {
                (WhichTable::One, ParamsSource::Published) => table1_params(sigma)?,
                (WhichTable::Two, ParamsSource::Published) => table2_params(sigma)?,
                (WhichTable::One, ParamsSource::Optimizer) => minimize(sigma, &SearchConfig::table1())?.0,
                (WhichTable::Two, ParamsSource::Optimizer) => minimize(sigma, &SearchConfig::table2())?.0,
            };
            row_from_params(which, &p)
        })
        .collect()
}

pub fn all_sigmas() -> Vec<f64> {
    TABLE1.iter().map(|r| r.sigma).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Tsv,
    Pretty,
}

impl FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "tsv" => Ok(TableFormat::Tsv),
            "pretty" => Ok(TableFormat::Pretty),
            _ => Err(Error::Parse(format!("unknown format `{s}` (csv, tsv, pretty)"))),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Csv => "csv",
            TableFormat::Tsv => "tsv",
            TableFormat::Pretty => "pretty",
        })
    }
}

/// Round half to even at `decimals` places and format.
pub fn round_half_even(v: f64, decimals: usize) -> String {
    let scale = 10f64.powi(decimals as i32);
    let scaled = v * scale;
    // only values that are not integers after scaling need the tie rule
    let r = scaled.round_ties_even() / scale;
    format!("{r:.decimals$}")
}

/// Render rows. Machine formats carry 17 significant digits; the pretty
/// format uses the published number of decimals per column.
pub fn render_table(which: WhichTable, rows: &[TableRow], format: TableFormat) -> String {
    let (header, decimals): (&[&str], &[usize]) = match which {
        WhichTable::One => (&TABLE1_HEADER, &TABLE1_DECIMALS),
        WhichTable::Two => (&TABLE2_HEADER, &TABLE2_DECIMALS),
    };
    let mut out = String::new();
    match format {
        TableFormat::Csv | TableFormat::Tsv => {
            let sep = if format == TableFormat::Csv { "," } else { "\t" };
            out.push_str(&header.join(sep));
            out.push('\n');
            for r in rows {
                let cells: Vec<String> = r.values().into_iter().map(fmt17).collect();
                out.push_str(&cells.join(sep));
                out.push('\n');
            }
        }
        TableFormat::Pretty => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    r.values()
                        .into_iter()
                        .zip(decimals)
                        .map(|(v, &d)| round_half_even(v, d))
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = (0..header.len())
                .map(|i| cells.iter().map(|c| c[i].len()).chain([header[i].len()]).max().unwrap_or(0))
                .collect();
            let line = |items: Vec<&str>| -> String {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            out.push_str(&line(header.to_vec()));
            out.push('\n');
            for c in &cells {
                out.push_str(&line(c.iter().map(String::as_str).collect()));
                out.push('\n');
            }
        }
    }
    out
}

/// Parse CSV or TSV produced by [`render_table`].
pub fn parse_table(which: WhichTable, text: &str, format: TableFormat) -> Result<Vec<TableRow>> {
    let sep = match format {
        TableFormat::Csv => ',',
        TableFormat::Tsv => '\t',
        TableFormat::Pretty => return Err(Error::Parse("pretty tables are not machine readable".into())),
    };
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
    let expected = match which {
        WhichTable::One => TABLE1_HEADER.join(&sep.to_string()),
        WhichTable::Two => TABLE2_HEADER.join(&sep.to_string()),
    };
    if header != expected {
        return Err(Error::Parse(format!("unexpected header `{header}`")));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l
                .split(sep)
                .map(|c| c.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad cell `{c}`"))))
                .collect::<Result<_>>()?;
            TableRow::from_values(which, &v)
        })
        .collect()
}

impl TableRow {
    pub fn table(&self) -> WhichTable {
        self.which()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_even_rounding() {
        assert_eq!(round_half_even(0.125, 2), "0.12");
        assert_eq!(round_half_even(0.375, 2), "0.38");
        assert_eq!(round_half_even(2.5, 0), "2");
        assert_eq!(round_half_even(11.49878, 3), "11.499");
    }

    #[test]
    fn unknown_sigma_is_rejected() {
        assert!(table1_params(0.555).is_err());
        assert!(emit_table(WhichTable::One, &[0.4], ParamsSource::Published).is_err());
    }

    #[test]
    fn single_row_087() {
        let rows = emit_table(WhichTable::One, &[0.87], ParamsSource::Published).unwrap();
        match rows[0] {
            TableRow::One(r) => assert!((r.a - 9.926).abs() / 9.926 < 5e-3, "{}", r.a),
            _ => unreachable!(),
        }
    }

    #[test]
    fn row_075_layout() {
        let rows = emit_table(WhichTable::One, &[0.75], ParamsSource::Published).unwrap();
        let TableRow::One(r) = rows[0] else { unreachable!() };
        assert_eq!((r.k, r.mu, r.alpha, r.delta, r.d), (1.0, 1.245, 0.189, 0.303, 0.338));
        assert!((r.a - 5.277).abs() / 5.277 < 5e-3);
        assert!((r.b - 4.403).abs() / 4.403 < 5e-3);
    }

    #[test]
    fn pretty_has_header() {
        let rows = emit_table(WhichTable::Two, &[0.9], ParamsSource::Published).unwrap();
        let s = render_table(WhichTable::Two, &rows, TableFormat::Pretty);
        assert!(s.lines().next().unwrap().contains("N(sigma;H0)"));
        assert!(s.contains("130.07"), "{s}");
    }
}
