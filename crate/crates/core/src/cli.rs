//! Command-line front end: one subcommand per analysis, emitting CSV or JSON tables.
//!
//! Numbers are written with 12 significant digits. JSON documents carry a schema
//! `version`, the crate version, and an echo of the configuration that produced them.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::critical::{self, PhasePoint, DEFAULT_AMBIENT_N, DEFAULT_EPS};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::mc::{self, MCConfig, XRule};
use crate::phase::{self, Method, RivParams};
use crate::rivdist::{self, RivShape, Triplet};
use crate::specfun;

pub const SCHEMA_VERSION: u32 = 1;
const SIG_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(
    name = "riv-lab",
    version,
    about = "RIV distributions, RIC critical functions and L1 phase transitions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// PDF and CDF table of the left or right RIV for one triplet.
    Dist(DistArgs),
    /// LESP/UESP support band of the left RIV along a δ sweep.
    Support(SupportArgs),
    /// Critical values at one point, or a level curve of u_crit.
    Critical(CriticalArgs),
    /// Strong-equivalence boundaries and measurement bounds.
    Phase(PhaseArgs),
    /// Monte Carlo validation report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Form {
    Exact,
    Asymptotic,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file (a directory for `phase`); stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Problem size as K,M,N.
    #[arg(long, value_parser = parse_triplet)]
    pub triplet: Triplet,
    #[arg(long, value_enum, default_value_t = Side::Left)]
    pub side: Side,
    #[arg(long, value_enum, default_value_t = Form::Exact)]
    pub form: Form,
    /// Evaluation points as start:stop:count[:log]; defaults to the bulk of the law.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct SupportArgs {
    /// Fixed number of measurements; N = M/δ along the sweep.
    #[arg(long, conflicts_with = "n")]
    pub m: Option<f64>,
    /// Fixed ambient dimension; M = δN along the sweep.
    #[arg(long)]
    pub n: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub rho: f64,
    /// δ sweep.
    #[arg(long, default_value = "0.05:1:96")]
    pub grid: GridSpec,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    /// Calibrate eps so the band at --calibrate-delta is LESP,UESP.
    #[arg(long, value_parser = parse_pair, conflicts_with = "eps")]
    pub calibrate: Option<(f64, f64)>,
    #[arg(long, default_value_t = 0.2)]
    pub calibrate_delta: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    /// Level of the u_crit curve; switches to curve mode.
    #[arg(long, conflicts_with = "rho")]
    pub level: Option<f64>,
    #[arg(long, requires = "delta")]
    pub rho: Option<f64>,
    #[arg(long, requires = "rho")]
    pub delta: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_AMBIENT_N)]
    pub n: f64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    /// δ sweep for curve mode; 100 log-spaced points on [0.01, 1] by default.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[arg(long, value_delimiter = ',', default_value = "riv,gfa")]
    pub method: Vec<Method>,
    #[arg(long, default_value_t = DEFAULT_AMBIENT_N)]
    pub n: f64,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_parser = parse_triplet, default_value = "2,6,8")]
    pub triplet: Triplet,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, env = "RIV_LAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Entry variance; 1/M when omitted.
    #[arg(long)]
    pub sigma2: Option<f64>,
    #[arg(long, default_value = "equal-entries")]
    pub x_rule: XRule,
    /// Report file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_triplet(s: &str) -> std::result::Result<Triplet, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [k, m, n] = parts.as_slice() else {
        return Err(format!("expected K,M,N, got {s:?}"));
    };
    let num = |x: &str| x.parse::<u64>().map_err(|e| format!("{x:?}: {e}"));
    Triplet::new(num(k)?, num(m)?, num(n)?).map_err(|e| e.to_string())
}

fn parse_pair(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected two comma-separated numbers, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

/// Rounds to 12 significant digits and prints the shortest form that round-trips,
/// in exponent notation outside `[1e-4, 1e15)`.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let r = round_sig(x);
    if r != 0.0 && (r.abs() < 1e-4 || r.abs() >= 1e15) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .map(|x| json!(round_sig(x)))
            .unwrap_or(Value::Null),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

#[derive(Debug, Clone)]
enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => json!(round_sig(*x)),
            Cell::Num(x) => json!(format_number(*x)),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

#[derive(Debug, Clone)]
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

fn document(command: &str, config: Value, body: Map<String, Value>) -> Value {
    let mut doc = Map::new();
    doc.insert("version".into(), json!(SCHEMA_VERSION));
    doc.insert("crate_version".into(), json!(env!("CARGO_PKG_VERSION")));
    doc.insert("command".into(), json!(command));
    doc.insert("config".into(), round_json(config));
    for (k, v) in body {
        doc.insert(k, round_json(v));
    }
    Value::Object(doc)
}

fn json_text(doc: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn write_text(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    let io = |e: std::io::Error| Error::Config(format!("I/O error: {e}"));
    match path {
        Some(p) => std::fs::write(p, text).map_err(io),
        None => stdout.write_all(text.as_bytes()).map_err(io),
    }
}

fn emit(
    output: &Output,
    command: &str,
    config: Value,
    table: &Table,
    meta: Map<String, Value>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let text = match output.format {
        Format::Csv => table.to_csv(),
        Format::Json => {
            let mut body = meta;
            body.insert("rows".into(), table.to_json());
            json_text(&document(command, config, body))?
        }
    };
    write_text(output.out.as_deref(), &text, stdout)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// Parses `args` (program name first) and runs the command, writing to `stdout`
/// unless an `--out` path is given. Returns `Ok(false)` when a validation run
/// found deterministic violations.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write) -> std::result::Result<bool, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    run(cli, stdout).map_err(CliError::Run)
}

#[derive(Debug)]
pub enum CliError {
    Usage(clap::Error),
    Run(Error),
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Dist(a) => cmd_dist(&a, stdout).map(|_| true),
        Command::Support(a) => cmd_support(&a, stdout).map(|_| true),
        Command::Critical(a) => cmd_critical(&a, stdout).map(|_| true),
        Command::Phase(a) => cmd_phase(&a, stdout).map(|_| true),
        Command::Validate(a) => cmd_validate(&a, stdout),
    }
}

/// Entry point of the binary.
pub fn main() -> std::process::ExitCode {
    let mut stdout = std::io::stdout().lock();
    match run_from(std::env::args_os(), &mut stdout) {
        Ok(true) => std::process::ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("riv-lab: deterministic checks failed");
            std::process::ExitCode::from(1)
        }
        Err(CliError::Usage(e)) => {
            let _ = e.print();
            std::process::ExitCode::from(if e.use_stderr() { 2 } else { 0 })
        }
        Err(CliError::Run(e)) => {
            eprintln!("riv-lab: {e}");
            std::process::ExitCode::from(2)
        }
    }
}

fn default_dist_grid(shape: &RivShape, side: Side) -> Result<GridSpec> {
    match side {
        Side::Left => Ok(GridSpec::linear(0.0, 1.0, 201)),
        Side::Right => {
            let mut hi = 0.25;
            while shape.right_cdf(hi)? < 1.0 - 1e-9 {
                hi *= 2.0;
            }
            Ok(GridSpec::linear(0.0, hi, 201))
        }
    }
}

fn cmd_dist(a: &DistArgs, stdout: &mut dyn Write) -> Result<()> {
    let t = a.triplet;
    let shape = t.shape();
    let grid = match a.grid {
        Some(g) => g,
        None => default_dist_grid(&shape, a.side)?,
    };
    let var = match a.side {
        Side::Left => "u",
        Side::Right => "v",
    };
    let mut table = Table::new(vec![var, "pdf", "cdf", "log_pdf"]);
    for x in grid.points()? {
        let (pdf, cdf, log_pdf) = match (a.side, a.form) {
            (Side::Left, Form::Exact) => {
                let lp = shape.left_log_pdf(x)?;
                (lp.exp(), shape.left_cdf(x)?, lp)
            }
            (Side::Right, Form::Exact) => {
                let lp = shape.right_log_pdf(x)?;
                (lp.exp(), shape.right_cdf(x)?, lp)
            }
            (Side::Left, Form::Asymptotic) => {
                let p = shape.left_pdf_asym(x)?;
                (p, shape.left_cdf_asym(x)?, p.ln())
            }
            (Side::Right, Form::Asymptotic) => {
                let p = shape.right_pdf_asym(x)?;
                (p, shape.right_cdf_asym(x)?, p.ln())
            }
        };
        table.push(vec![
            Cell::Num(x),
            Cell::Num(pdf),
            Cell::Num(cdf),
            Cell::Num(log_pdf),
        ]);
    }
    let config = json!({
        "triplet": [t.k(), t.m(), t.n()],
        "side": format!("{:?}", a.side).to_lowercase(),
        "form": format!("{:?}", a.form).to_lowercase(),
        "grid": grid.to_string(),
    });
    let mut meta = Map::new();
    meta.insert("log_ns".into(), json!(t.log_ns().ln()));
    meta.insert(
        "convergence_indicator".into(),
        json!(t.convergence_indicator()),
    );
    meta.insert("weibull".into(), to_value(&shape.weibull()));
    if let Ok(g) = shape.gumbel() {
        meta.insert("gumbel".into(), to_value(&g));
    }
    emit(&a.output, "dist", config, &table, meta, stdout)
}

/// `(M, N)` at one δ of the support sweep.
fn support_dims(a: &SupportArgs, delta: f64) -> (f64, f64) {
    match (a.m, a.n) {
        (_, Some(n)) => (delta * n, n),
        (Some(m), None) => (m, m / delta),
        (None, None) => (1000.0, 1000.0 / delta),
    }
}

fn support_shape(a: &SupportArgs, delta: f64) -> Result<RivShape> {
    let (m, n) = support_dims(a, delta);
    let k = a.rho * m;
    if !(k >= 1.0 - 1e-12 && k <= m && m < n) {
        return Err(Error::Config(format!(
            "need 1 <= K <= M < N, got K={k}, M={m}, N={n} at delta={delta}"
        )));
    }
    RivShape::new(m, specfun::log_binomial(n, k.max(1.0))?)
}

fn cmd_support(a: &SupportArgs, stdout: &mut dyn Write) -> Result<()> {
    if !(a.rho > 0.0 && a.rho <= 1.0) {
        return Err(Error::Config(format!(
            "rho must lie in (0, 1], got {}",
            a.rho
        )));
    }
    let deltas = a.grid.points()?;
    if deltas.iter().any(|&d| !(d > 0.0 && d < 1.0)) {
        return Err(Error::Config("support sweep needs 0 < delta < 1".into()));
    }
    let eps = match a.calibrate {
        Some((lesp, uesp)) => {
            rivdist::calibrate_support_eps(&support_shape(a, a.calibrate_delta)?, lesp, uesp)?
        }
        None => a.eps,
    };
    let mut table = Table::new(vec![
        "delta", "m", "n", "k", "lesp", "uesp", "width", "clamped",
    ]);
    for &delta in &deltas {
        let (m, n) = support_dims(a, delta);
        let band = rivdist::support_band(&support_shape(a, delta)?, eps)?;
        table.push(vec![
            Cell::Num(delta),
            Cell::Num(m),
            Cell::Num(n),
            Cell::Num(a.rho * m),
            Cell::Num(band.lesp),
            Cell::Num(band.uesp),
            Cell::Num(band.width()),
            Cell::Bool(band.clamped),
        ]);
    }
    let config = json!({
        "m": a.m,
        "n": a.n,
        "rho": a.rho,
        "grid": a.grid.to_string(),
        "eps": eps,
        "calibrate": a.calibrate.map(|(l, u)| json!({"lesp": l, "uesp": u, "delta": a.calibrate_delta})),
    });
    let mut meta = Map::new();
    meta.insert("eps".into(), json!(eps));
    meta.insert("eps_calibrated".into(), json!(a.calibrate.is_some()));
    emit(&a.output, "support", config, &table, meta, stdout)
}

fn cmd_critical(a: &CriticalArgs, stdout: &mut dyn Write) -> Result<()> {
    if let (Some(rho), Some(delta)) = (a.rho, a.delta) {
        let p = PhasePoint::new(rho, delta, a.n, a.eps)?;
        let u = critical::u_crit(&p)?;
        let v = critical::v_crit(&p)?;
        let mut table = Table::new(vec![
            "rho",
            "delta",
            "n",
            "eps",
            "u_crit",
            "u_raw",
            "u_clamped",
            "v_crit",
            "v_raw",
            "v_clamped",
        ]);
        table.push(vec![
            Cell::Num(rho),
            Cell::Num(delta),
            Cell::Num(a.n),
            Cell::Num(a.eps),
            Cell::Num(u.value),
            Cell::Num(u.raw),
            Cell::Bool(u.clamped),
            Cell::Num(v.value),
            Cell::Num(v.raw),
            Cell::Bool(v.clamped),
        ]);
        let config = json!({"rho": rho, "delta": delta, "n": a.n, "eps": a.eps});
        return emit(&a.output, "critical", config, &table, Map::new(), stdout);
    }
    let level = a
        .level
        .ok_or_else(|| Error::Config("critical needs --level, or --rho with --delta".into()))?;
    let grid = a.grid.unwrap_or_else(GridSpec::default_delta);
    let deltas = grid.points()?;
    let curve = critical::level_curve(level, a.n, a.eps, &deltas)?;

    let table = curve_table(&curve, &deltas);
    let config = json!({"level": level, "n": a.n, "eps": a.eps, "grid": grid.to_string()});
    let mut meta = Map::new();
    meta.insert("unresolved".into(), json!(curve.unresolved.len()));
    emit(&a.output, "critical", config, &table, meta, stdout)
}

/// One row per grid δ; points without a root are kept and marked `no-root`.
fn curve_table(curve: &critical::SolvedCurve, deltas: &[f64]) -> Table {
    let mut table = Table::new(vec!["delta", "rho", "residual", "status"]);
    let mut solved = curve
        .series
        .points()
        .iter()
        .zip(&curve.residuals)
        .peekable();
    for &delta in deltas {
        match solved.peek() {
            Some((p, r)) if p.delta == delta => {
                table.push(vec![
                    Cell::Num(delta),
                    Cell::Num(p.value),
                    Cell::Num(**r),
                    Cell::Text("ok".into()),
                ]);
                solved.next();
            }
            _ => table.push(vec![
                Cell::Num(delta),
                Cell::Missing,
                Cell::Missing,
                Cell::Text("no-root".into()),
            ]),
        }
    }
    table
}

/// Computed and cited measurement-bound constants, as written to `summary.json`.
fn phase_summary(
    methods: &[Method],
    n: f64,
    eps: f64,
    grid: GridSpec,
) -> Result<(Value, Vec<(Method, Table)>)> {
    let deltas = grid.points()?;
    let params = RivParams { ambient_n: n, eps };
    let mut computed = Vec::new();
    let mut tables = Vec::new();
    let mut c_riv = None;
    for &method in methods {
        let b = phase::pt_boundary(method, Some(params), &deltas)?;
        let bound = phase::measurement_bound(&b)?;
        if method == Method::Riv {
            c_riv = Some(bound.c);
        }
        computed.push(json!({
            "approach": method.to_string(),
            "c": bound.c,
            "rho_max": bound.rho_max,
            "delta_at_max": bound.delta_at_max,
            "unresolved": b.curve.unresolved.len(),
            "provenance": "computed",
        }));
        tables.push((method, curve_table(&b.curve, &deltas)));
    }
    let cited: Vec<Value> = phase::cited_constants().iter().map(to_value).collect();
    let mut body = Map::new();
    body.insert("computed".into(), Value::Array(computed));
    body.insert("cited".into(), Value::Array(cited));
    if let Some(c) = c_riv {
        body.insert(
            "ev_over_riv".into(),
            json!({"value": phase::cited_ev_constant() / c, "provenance": "computed"}),
        );
    }
    let config = json!({
        "methods": methods.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "n": n,
        "eps": eps,
        "grid": grid.to_string(),
    });
    Ok((document("phase", config, body), tables))
}

fn cmd_phase(a: &PhaseArgs, stdout: &mut dyn Write) -> Result<()> {
    if a.method.is_empty() {
        return Err(Error::Config("no methods selected".into()));
    }
    let grid = a.grid.unwrap_or_else(GridSpec::default_delta);
    let (summary, tables) = phase_summary(&a.method, a.n, a.eps, grid)?;
    let summary_text = json_text(&summary)?;
    match &a.output.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("I/O error: {e}")))?;
            for (method, table) in &tables {
                let (name, text) = match a.output.format {
                    Format::Csv => (format!("boundary-{method}.csv"), table.to_csv()),
                    Format::Json => {
                        let mut body = Map::new();
                        body.insert("method".into(), json!(method.to_string()));
                        body.insert("rows".into(), table.to_json());
                        let config = json!({"n": a.n, "eps": a.eps, "grid": grid.to_string()});
                        (
                            format!("boundary-{method}.json"),
                            json_text(&document("phase", config, body))?,
                        )
                    }
                };
                write_text(Some(&dir.join(name)), &text, stdout)?;
            }
            write_text(Some(&dir.join("summary.json")), &summary_text, stdout)
        }
        None => write_text(None, &summary_text, stdout),
    }
}

fn cmd_validate(a: &ValidateArgs, stdout: &mut dyn Write) -> Result<bool> {
    let sigma2 = a.sigma2.unwrap_or(1.0 / a.triplet.m() as f64);
    let cfg = MCConfig::with_options(a.triplet, a.trials, a.seed, sigma2, a.x_rule)?;
    let report = mc::validate(&cfg)?;
    let ok = report.deterministic_ok();
    let config = json!({
        "triplet": [a.triplet.k(), a.triplet.m(), a.triplet.n()],
        "trials": a.trials,
        "seed": a.seed,
        "sigma2": sigma2,
        "x_rule": a.x_rule.to_string(),
    });
    let mut body = Map::new();
    body.insert("passed".into(), json!(ok));
    body.insert("report".into(), to_value(&report));
    write_text(
        a.out.as_deref(),
        &json_text(&document("validate", config, body))?,
        stdout,
    )?;
    Ok(ok)
}
