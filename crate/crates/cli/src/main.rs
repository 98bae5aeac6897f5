use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use zerodensity::constants::{PartialParams, H0};
use zerodensity::optimizer::minimize_traced;
use zerodensity::tables::{all_sigmas, emit_table, render_table, table1_params, table2_params};
use zerodensity::verification::*;
use zerodensity::{
    bound_log_form, bound_power_form, BoundResult, ConstantBundle, Error, ParameterSet, ParamsSource,
    SearchConfig, TableFormat, WhichTable,
};

/// Sets the directory that relative `--output` paths are written to.
const OUT_DIR_VAR: &str = "ZERODENSITY_OUT_DIR";

const EXIT_USAGE: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "zerodensity", version, about = "Explicit zero-density bounds for the Riemann zeta function")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the bound for one parameter set.
    Bound(BoundArgs),
    /// Regenerate a table of bounds over sigma.
    Table(TableArgs),
    /// Search for parameters minimising the bound at one sigma.
    Optimize(OptimizeArgs),
    /// Run the inequality oracles.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long = "H", conflicts_with = "h_gap")]
    h: Option<f64>,
    /// H given as its distance below H0.
    #[arg(long = "H0-minus-H")]
    h_gap: Option<f64>,
    /// Fill unset parameters from the published power-form row for sigma.
    #[arg(long, conflicts_with = "table2_defaults")]
    table1_defaults: bool,
    /// Fill unset parameters from the published log-form row for sigma.
    #[arg(long)]
    table2_defaults: bool,
    /// `name = value` file; command-line flags take precedence.
    #[arg(long)]
    params_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormArg::Both)]
    form: FormArg,
    /// Also print every intermediate constant.
    #[arg(long)]
    show_constants: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormArg {
    Log,
    Power,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Source {
    /// The published parameter rows.
    #[value(name = "paper", alias = "published")]
    Published,
    Optimizer,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Tsv,
    Pretty,
}

impl From<FormatArg> for TableFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => TableFormat::Csv,
            FormatArg::Tsv => TableFormat::Tsv,
            FormatArg::Pretty => TableFormat::Pretty,
        }
    }
}

#[derive(Args, Debug)]
struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    which: u8,
    #[arg(long, value_enum, default_value_t = Source::Published)]
    source: Source,
    /// Comma-separated sigma values; defaults to every published row.
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Table1,
    Table2,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    #[arg(long)]
    sigma: f64,
    #[arg(long, value_enum, default_value_t = Mode::Table1)]
    mode: Mode,
    /// Overrides for the search grid (`alpha = lo, hi, steps`, ...).
    #[arg(long)]
    grid_file: Option<PathBuf>,
    /// Also search over H below H0.
    #[arg(long)]
    search_h: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Lemma {
    Mobius,
    Lambda,
    Divisor,
    Mv,
    Zeta,
    Weight,
    Smoothing,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormatArg {
    Text,
    Csv,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Lemma::All)]
    lemma: Lemma,
    /// Sieve size for the arithmetic checks.
    #[arg(long = "X")]
    x: Option<u64>,
    /// Seed for the random mean-value sequence.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ReportFormatArg::Text)]
    format: ReportFormatArg,
    #[arg(long)]
    output: Option<PathBuf>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Validation(_) => EXIT_VALIDATION,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            let path = resolve_output(path);
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| usage(format!("cannot create {}: {e}", parent.display())))?;
            }
            fs::write(&path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| usage(format!("cannot write output: {e}")))
        }
    }
}

fn bound_params(args: &BoundArgs) -> Result<ParameterSet, Failure> {
    let flags = PartialParams {
        sigma: args.sigma,
        t: args.t,
        k: args.k,
        alpha: args.alpha,
        delta: args.delta,
        d: args.d,
        eta: args.eta,
        mu: args.mu,
        h_gap: args.h_gap.or(args.h.map(|h| H0 - h)),
    };
    let mut merged = flags;
    if let Some(path) = &args.params_file {
        let mut file = PartialParams::default();
        file.apply_text(&read_file(path)?)?;
        merged = merged.or(file);
    }
    if args.table1_defaults || args.table2_defaults {
        let sigma = merged.sigma.ok_or_else(|| usage("--sigma is required with a table preset"))?;
        let preset = if args.table1_defaults { table1_params(sigma)? } else { table2_params(sigma)? };
        merged = merged.or(PartialParams::from_params(&preset));
    }
    if merged.t.is_none() {
        merged.t = Some(H0);
    }
    Ok(merged.finish()?)
}

fn result_lines(r: &BoundResult) -> String {
    let mut s = r.to_key_value();
    for n in &r.notes {
        s.push_str(&format!("# note: {n}\n"));
    }
    s
}

fn cmd_bound(args: BoundArgs) -> Result<(), Failure> {
    let p = bound_params(&args)?;
    let mut out = String::new();
    match args.form {
        FormArg::Log => out.push_str(&result_lines(&bound_log_form(&p)?)),
        FormArg::Power => out.push_str(&result_lines(&bound_power_form(&p)?)),
        FormArg::Both => {
            out.push_str(&result_lines(&bound_log_form(&p)?));
            out.push('\n');
            out.push_str(&result_lines(&bound_power_form(&p)?));
        }
    }
    if args.show_constants {
        out.push_str("\n# constants\n");
        out.push_str(&ConstantBundle::evaluate(&p)?.to_key_value());
    }
    emit(&out, None)
}

fn cmd_table(args: TableArgs) -> Result<(), Failure> {
    let which = if args.which == 1 { WhichTable::One } else { WhichTable::Two };
    let source = match args.source {
        Source::Published => ParamsSource::Published,
        Source::Optimizer => ParamsSource::Optimizer,
    };
    let sigmas = if args.sigma.is_empty() { all_sigmas() } else { args.sigma };
    let rows = emit_table(which, &sigmas, source)?;
    emit(&render_table(which, &rows, args.format.into()), args.output.as_deref())
}

fn cmd_optimize(args: OptimizeArgs) -> Result<(), Failure> {
    let mut cfg = match args.mode {
        Mode::Table1 => SearchConfig::table1(),
        Mode::Table2 => SearchConfig::table2(),
    };
    if let Some(path) = &args.grid_file {
        cfg.apply_text(&read_file(path)?)?;
    }
    if args.search_h {
        cfg = cfg.with_h_search();
    }
    let (p, r, trace) = minimize_traced(args.sigma, &cfg)?;
    let mut out = p.to_key_value();
    for line in result_lines(&r).lines() {
        if line.starts_with('#') {
            out.push_str(line);
        } else {
            out.push_str("# ");
            out.push_str(line);
        }
        out.push('\n');
    }
    out.push_str(&format!("# evaluations = {}\n", trace.evaluations));
    emit(&out, args.output.as_deref())
}

fn run_lemmas(args: &VerifyArgs) -> zerodensity::Result<Vec<LemmaReport>> {
    let wants = |l: Lemma| args.lemma == l || args.lemma == Lemma::All;
    let mut reports = Vec::new();
    if wants(Lemma::Mobius) {
        reports.extend(check_mobius_sums(args.x.unwrap_or(10_000))?);
    }
    if wants(Lemma::Lambda) {
        let x = args.x.unwrap_or(1_000);
        let cap = (5 * x as usize).max(1_000_000);
        reports.extend(check_lambda_sums(x, 0.303, cap)?);
    }
    if wants(Lemma::Divisor) {
        for tau in [1.5, 2.0, 2.5] {
            reports.extend(check_divisor_sums(args.x.unwrap_or(1_000), tau)?);
        }
    }
    if wants(Lemma::Mv) {
        reports.push(check_mv_inequality(&random_mv_sequence(args.seed, 50), 0.0, 500.0)?);
    }
    if wants(Lemma::Zeta) {
        reports.extend(check_zeta_bounds(&[3.0, 10.0, 100.0, 1000.0], 0.3)?);
    }
    if wants(Lemma::Weight) {
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 200.0).collect();
        for sigma in [0.5, 0.75, 1.05] {
            reports.extend(check_weight_bounds(sigma, 1e4, 0.105, 1002.0, &grid));
        }
    }
    if wants(Lemma::Smoothing) {
        reports.extend(check_smoothing_and_convexity(10, 50.0, (0.5, 0.75, 1.1), 0.3)?);
    }
    Ok(reports)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let reports = run_lemmas(&args)?;
    let format = match args.format {
        ReportFormatArg::Text => ReportFormat::Text,
        ReportFormatArg::Csv => ReportFormat::Csv,
    };
    emit(&render_reports(&reports, format), args.output.as_deref())?;
    let failed: Vec<_> = reports.iter().filter(|r| r.is_regression()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        let ids: Vec<String> = failed.iter().map(|r| format!("{} ({})", r.lemma_id, r.instance)).collect();
        Err(Failure { code: EXIT_VERIFICATION, message: format!("failed: {}", ids.join(", ")) })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let result = match cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Table(a) => cmd_table(a),
        Command::Optimize(a) => cmd_optimize(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn relative_output_is_resolved_against_env_dir() {
        let abs = Path::new("/tmp/x.csv");
        assert_eq!(resolve_output(abs), abs);
    }
}
