//! Command-line front end: `gen`, `stat` and `verify`.
//!
//! Exit codes: 0 when everything ran and every report passed, 1 on a failed
//! check or a runtime error, 2 on a usage error. Flags may also come from a
//! JSON object given with `--config FILE`; keys are long flag names and
//! flags on the command line take precedence.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::analysis::{
    check_alpha_beta_inequality, check_bounds, check_cauchy_schwarz, check_covering_inequality,
    check_i2_identity, check_monotone, check_pcf_integral_identity, estimate_limit, remark_example,
    VerificationReport, DEFAULT_CONV_TOL,
};
use crate::error::Error;
use crate::oracle::{brute_i2, brute_pcf, stepwise_pcf_integral};
use crate::sequences::{read_points, write_points, GenSpec, PointSet};
use crate::statistics::{i2_closed, max_admissible_s, pcf, pcf_integral, triangle_kernel};

/// Header of the `stat` table.
pub const CSV_HEADER: &str = "s,F,two_s,T,integral_F,I2_closed,I2_sweep";
/// Extra columns written with `--oracle`.
pub const CSV_ORACLE_HEADER: &str = "F_brute,integral_F_stepwise,I2_brute";

#[derive(Debug, Parser)]
#[command(
    name = "paircorr",
    version,
    about = "Weak pair correlation statistics on the circle",
    args_override_self = true
)]
struct Cli {
    /// JSON object of flag values; command-line flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a point file.
    Gen(GenArgs),
    /// Tabulate the statistics over an s grid as CSV.
    Stat(StatArgs),
    /// Run verification checks and print JSON reports.
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Uniform,
    Kronecker,
    Vdc,
    Multiset,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, value_parser = parse_count)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Kronecker rotation: a number, `golden` or `sqrt2`.
    #[arg(long, value_parser = parse_rotation)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 2)]
    base: u64,
    /// Number of distinct values for `multiset`.
    #[arg(long)]
    distinct: Option<usize>,
    /// Output path, `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

/// Sequence parameters shared by `stat` and `verify`.
#[derive(Debug, Args)]
struct SequenceArgs {
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Kronecker rotation: a number, `golden` or `sqrt2`.
    #[arg(long, value_parser = parse_rotation)]
    rotation: Option<f64>,
    #[arg(long, default_value_t = 2)]
    base: u64,
    #[arg(long)]
    distinct: Option<usize>,
}

impl SequenceArgs {
    fn spec(&self) -> Result<GenSpec<f64>, CliError> {
        let kind = self
            .kind
            .ok_or_else(|| CliError::Usage("--kind is required".into()))?;
        Ok(match kind {
            Kind::Uniform => GenSpec::Uniform { seed: self.seed },
            Kind::Kronecker => GenSpec::Kronecker {
                alpha: self.rotation.ok_or_else(|| {
                    CliError::Usage("--rotation is required for kronecker".into())
                })?,
            },
            Kind::Vdc => GenSpec::VanDerCorput { base: self.base },
            Kind::Multiset => GenSpec::Multiset {
                m_distinct: self
                    .distinct
                    .ok_or_else(|| CliError::Usage("--distinct is required for multiset".into()))?,
                seed: self.seed,
            },
        })
    }
}

/// A point file or the first `n` points of a generator.
#[derive(Debug, Args)]
struct SourceArgs {
    #[arg(long, conflicts_with = "kind")]
    input: Option<PathBuf>,
    #[arg(long, value_parser = parse_count)]
    n: Option<usize>,
    #[command(flatten)]
    sequence: SequenceArgs,
}

impl SourceArgs {
    fn load(&self) -> Result<PointSet<f64>, CliError> {
        if let Some(path) = &self.input {
            let file = std::fs::File::open(path)
                .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            return Ok(read_points(BufReader::new(file))?);
        }
        let n = self
            .n
            .ok_or_else(|| CliError::Usage("give --input FILE or --kind with --n".into()))?;
        Ok(self.sequence.spec()?.generate(n)?)
    }
}

/// Linear grid `(smin, smax, steps)` or an explicit list.
#[derive(Debug, Args)]
struct GridArgs {
    /// Explicit comma-separated s values; overrides the linear grid.
    #[arg(long, value_delimiter = ',')]
    s: Option<Vec<f64>>,
    /// Defaults to `smax / steps`.
    #[arg(long)]
    smin: Option<f64>,
    #[arg(long)]
    smax: Option<f64>,
    #[arg(long, default_value_t = 20)]
    steps: usize,
}

impl GridArgs {
    fn values(&self) -> Result<Vec<f64>, CliError> {
        if let Some(list) = &self.s {
            if list.is_empty() {
                return Err(CliError::Usage("--s needs at least one value".into()));
            }
            return Ok(list.clone());
        }
        let smax = self
            .smax
            .ok_or_else(|| CliError::Usage("give --s or --smax".into()))?;
        linear_grid(
            self.smin.unwrap_or(smax / self.steps as f64),
            smax,
            self.steps,
        )
    }
}

/// `steps` evenly spaced values from `smin` to `smax` inclusive.
pub fn linear_grid(smin: f64, smax: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if steps == 0 || !(smin <= smax) || !(smin >= 0.0) {
        return Err(CliError::Usage(format!(
            "bad grid: smin = {smin}, smax = {smax}, steps = {steps}"
        )));
    }
    if steps == 1 {
        return Ok(vec![smax]);
    }
    let span = smax - smin;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                smax
            } else {
                smin + span * i as f64 / last
            }
        })
        .collect())
}

#[derive(Debug, Args)]
struct StatArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long)]
    beta: f64,
    #[command(flatten)]
    grid: GridArgs,
    /// Append columns computed by the brute-force references.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Debug, Args)]
struct LadderArgs {
    /// Comma-separated sample sizes, e.g. `1e3,1e4,1e5` or `2^13,2^15,2^17`.
    #[arg(long, value_delimiter = ',', value_parser = parse_count, required = true)]
    ladder: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_CONV_TOL)]
    conv_tol: f64,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Closed form vs sweep for I, kernel vs stepwise integral of F, and I >= s^2.
    Identities {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Largest N for the quadratic stepwise-integral reference.
        #[arg(long, default_value_t = 5000)]
        oracle_max_n: usize,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Lower bound 2s and upper bound f'(0) s on the ladder estimate.
    Bounds {
        #[command(flatten)]
        sequence: SequenceArgs,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// f_alpha <= f_beta on ladder estimates, plus the finite-N second-moment
    /// inequality at the largest N.
    Monotone {
        #[command(flatten)]
        sequence: SequenceArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// I(s) <= (K+1)^2 I(s/K).
    Covering {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,5,10")]
        k: Vec<u32>,
        #[arg(long, default_value = "-")]
        out: String,
    },
    /// Piecewise counterexample: integral bounds without the pointwise bound.
    Remark {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value = "-")]
        out: String,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => CliError::Usage(msg),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn parse_count(text: &str) -> Result<usize, String> {
    let text = text.trim();
    if let Some((b, e)) = text.split_once('^') {
        let b: u32 = b.parse().map_err(|_| format!("bad base in {text:?}"))?;
        let e: u32 = e.parse().map_err(|_| format!("bad exponent in {text:?}"))?;
        return b
            .checked_pow(e)
            .map(|v| v as usize)
            .ok_or_else(|| format!("{text} overflows"));
    }
    if let Ok(v) = text.parse::<usize>() {
        return Ok(v);
    }
    let v: f64 = text.parse().map_err(|_| format!("not a count: {text:?}"))?;
    if v >= 0.0 && v.fract() == 0.0 && v < 1e15 {
        Ok(v as usize)
    } else {
        Err(format!("not a whole count: {text:?}"))
    }
}

fn parse_rotation(text: &str) -> Result<f64, String> {
    match text.trim() {
        "golden" => Ok((1.0 + 5f64.sqrt()) / 2.0),
        "sqrt2" => Ok(std::f64::consts::SQRT_2),
        other => other
            .parse()
            .map_err(|_| format!("not a number: {other:?}")),
    }
}

fn fmt_value(v: f64) -> String {
    format!("{v:?}")
}

/// Writes `bytes` to stdout or atomically to a file.
fn emit(out: &str, bytes: &[u8]) -> Result<(), CliError> {
    if out == "-" {
        let mut stdout = io::stdout().lock();
        stdout
            .write_all(bytes)
            .and_then(|_| stdout.flush())
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        return Ok(());
    }
    let path = Path::new(out);
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let runtime = |e: &dyn std::fmt::Display| CliError::Runtime(format!("{out}: {e}"));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| runtime(&e))?;
    tmp.write_all(bytes).map_err(|e| runtime(&e))?;
    tmp.persist(path).map_err(|e| runtime(&e))?;
    Ok(())
}

fn check_grid_admissible(n: usize, beta: f64, grid: &[f64]) -> Result<(), CliError> {
    let max_s = max_admissible_s(n, beta)?;
    if let Some(&bad) = grid.iter().find(|&&s| s > max_s) {
        return Err(CliError::Runtime(format!(
            "scale overflow: s = {bad} exceeds the largest admissible s = {max_s} \
             (s / N^beta must stay <= 1/2 for N = {n}, beta = {beta})"
        )));
    }
    if let Some(&bad) = grid.iter().find(|&&s| !(s > 0.0)) {
        return Err(CliError::Usage(format!(
            "grid values must be positive, got {bad}"
        )));
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<bool, CliError> {
    let spec = SequenceArgs {
        kind: Some(args.kind),
        seed: args.seed,
        rotation: args.alpha,
        base: args.base,
        distinct: args.distinct,
    };
    let spec = spec.spec().map_err(|e| match e {
        CliError::Usage(m) => CliError::Usage(m.replace("--rotation", "--alpha")),
        other => other,
    })?;
    let ps = spec.generate(args.n)?;
    let mut buf = Vec::new();
    write_points(&ps, &mut buf)?;
    emit(&args.out, &buf)?;
    eprintln!(
        "n={} generator={} {}",
        ps.len(),
        ps.meta().generator,
        ps.meta().params_text()
    );
    Ok(true)
}

/// The `stat` CSV for a point set.
pub fn stat_table(
    ps: &PointSet<f64>,
    beta: f64,
    grid: &[f64],
    oracle: bool,
) -> Result<String, CliError> {
    check_grid_admissible(ps.len(), beta, grid)?;
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    if oracle {
        out.push(',');
        out.push_str(CSV_ORACLE_HEADER);
    }
    out.push('\n');
    for &s in grid {
        let f = pcf(ps, beta, s)?.value;
        let kernel = triangle_kernel(ps, beta, s)?;
        let integral = pcf_integral(ps, beta, s)?;
        let m = i2_closed(ps, beta, s)?;
        let cols = [s, f, 2.0 * s, kernel, integral, m.closed, m.sweep];
        let row: Vec<String> = cols.iter().map(|&v| fmt_value(v)).collect();
        out.push_str(&row.join(","));
        if oracle {
            let resolution = (10 * ps.len()).max(100_000);
            let extra = [
                brute_pcf(ps, beta, s)?,
                stepwise_pcf_integral(ps, beta, s)?,
                brute_i2(ps, beta, s, resolution)?.value,
            ];
            for v in extra {
                let _ = write!(out, ",{}", fmt_value(v));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

fn cmd_stat(args: &StatArgs) -> Result<bool, CliError> {
    let ps = args.source.load()?;
    let grid = args.grid.values()?;
    let table = stat_table(&ps, args.beta, &grid, args.oracle)?;
    emit(&args.out, table.as_bytes())?;
    Ok(true)
}

fn emit_reports(out: &str, reports: &[VerificationReport]) -> Result<bool, CliError> {
    let mut text = serde_json::to_string_pretty(reports).expect("reports serialize");
    text.push('\n');
    emit(out, text.as_bytes())?;
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        eprintln!("{failed} of {} checks failed", reports.len());
    }
    Ok(failed == 0)
}

fn cmd_verify(check: &VerifyCommand) -> Result<bool, CliError> {
    match check {
        VerifyCommand::Identities {
            source,
            beta,
            grid,
            oracle_max_n,
            out,
        } => {
            let ps = source.load()?;
            let grid = grid.values()?;
            check_grid_admissible(ps.len(), *beta, &grid)?;
            let with_stepwise = ps.len() <= *oracle_max_n;
            if !with_stepwise {
                eprintln!(
                    "N = {} exceeds --oracle-max-n = {oracle_max_n}; skipping identity_pcf_integral",
                    ps.len()
                );
            }
            let mut reports = Vec::new();
            for &s in &grid {
                reports.push(check_i2_identity(&ps, *beta, s)?);
                if with_stepwise {
                    reports.push(check_pcf_integral_identity(&ps, *beta, s)?);
                }
                reports.push(check_cauchy_schwarz(&ps, *beta, s)?);
            }
            emit_reports(out, &reports)
        }
        VerifyCommand::Bounds {
            sequence,
            beta,
            grid,
            ladder,
            tol,
            out,
        } => {
            let spec = sequence.spec()?;
            let grid = grid.values()?;
            check_grid_admissible(ladder.ladder[0], *beta, &grid)?;
            let le = estimate_limit(&spec, *beta, &grid, &ladder.ladder, ladder.conv_tol)?;
            let mut report = check_bounds(&le, *tol)?;
            annotate_sequence(&mut report, &spec);
            emit_reports(out, &[report])
        }
        VerifyCommand::Monotone {
            sequence,
            alpha,
            beta,
            grid,
            ladder,
            tol,
            out,
        } => {
            let spec = sequence.spec()?;
            let grid = grid.values()?;
            check_grid_admissible(ladder.ladder[0], alpha.min(*beta), &grid)?;
            let le_a = estimate_limit(&spec, *alpha, &grid, &ladder.ladder, ladder.conv_tol)?;
            let le_b = estimate_limit(&spec, *beta, &grid, &ladder.ladder, ladder.conv_tol)?;
            let mut report = check_monotone(&le_a, &le_b, *tol)?;
            annotate_sequence(&mut report, &spec);
            let mut reports = vec![report];
            let n_max = *ladder.ladder.last().expect("ladder is nonempty");
            let ps = spec.generate(n_max)?;
            for &s in &grid {
                reports.push(check_alpha_beta_inequality(&ps, *alpha, *beta, s)?);
            }
            emit_reports(out, &reports)
        }
        VerifyCommand::Covering {
            source,
            beta,
            grid,
            k,
            out,
        } => {
            let ps = source.load()?;
            let grid = grid.values()?;
            check_grid_admissible(ps.len(), *beta, &grid)?;
            let mut reports = Vec::new();
            for &s in &grid {
                for &kk in k {
                    reports.push(check_covering_inequality(&ps, *beta, s, kk)?);
                }
            }
            emit_reports(out, &reports)
        }
        VerifyCommand::Remark { c, delta, out } => {
            emit_reports(out, &[remark_example(*c, *delta)?])
        }
    }
}

fn annotate_sequence(report: &mut VerificationReport, spec: &GenSpec<f64>) {
    report
        .params
        .insert("generator".into(), Value::from(spec.name()));
    match spec {
        GenSpec::Uniform { seed } => {
            report.params.insert("seed".into(), Value::from(*seed));
        }
        GenSpec::Kronecker { alpha } => {
            report.params.insert("rotation".into(), Value::from(*alpha));
        }
        GenSpec::VanDerCorput { base } => {
            report.params.insert("base".into(), Value::from(*base));
        }
        GenSpec::Multiset { m_distinct, seed } => {
            report
                .params
                .insert("distinct".into(), Value::from(*m_distinct as u64));
            report.params.insert("seed".into(), Value::from(*seed));
        }
    }
}

/// Turns a JSON config object into flags.
fn config_tokens(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage(
            "config file must hold a JSON object".into(),
        ));
    };
    let scalar = |v: &Value| match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(CliError::Usage(format!("unsupported config value {other}"))),
    };
    let mut tokens = Vec::new();
    for (key, value) in &map {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => tokens.push(flag.into()),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                tokens.push(flag.into());
                tokens.push(parts.join(",").into());
            }
            other => {
                tokens.push(flag.into());
                tokens.push(scalar(other)?.into());
            }
        }
    }
    Ok(tokens)
}

/// Splices config flags in right after the (sub)command names so that later
/// command-line flags override them.
fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let pos = args.iter().position(|a| a == "--config");
    let inline = args
        .iter()
        .position(|a| a.to_str().is_some_and(|s| s.starts_with("--config=")));
    let (path, mut rest) = match (pos, inline) {
        (Some(i), _) if i + 1 < args.len() => {
            let path = PathBuf::from(&args[i + 1]);
            let mut rest = args.clone();
            rest.drain(i..=i + 1);
            (path, rest)
        }
        (_, Some(i)) => {
            let path = PathBuf::from(&args[i].to_str().expect("checked")["--config=".len()..]);
            let mut rest = args.clone();
            rest.remove(i);
            (path, rest)
        }
        _ => return Ok(args),
    };
    let tokens = config_tokens(&path)?;
    let Some(cmd) = rest
        .iter()
        .position(|a| a == "gen" || a == "stat" || a == "verify")
    else {
        return Ok(rest);
    };
    let at = if rest[cmd] == "verify" {
        cmd + 2
    } else {
        cmd + 1
    };
    let at = at.min(rest.len());
    rest.splice(at..at, tokens);
    Ok(rest)
}

/// Entry point shared by the binary and the tests.
pub fn run<I: IntoIterator<Item = OsString>>(args: I) -> ExitCode {
    let args = match expand_config(args.into_iter().collect()) {
        Ok(a) => a,
        Err(e) => return report_error(e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Stat(a) => cmd_stat(a),
        Command::Verify { check } => cmd_verify(check),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => report_error(e),
    }
}

fn report_error(e: CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        CliError::Runtime(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
