//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 verification failure, 64 usage,
//! 74 output could not be written.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use plate_flow_core::analytic::{self, FieldKind};
use plate_flow_core::oracle::{ComparisonReport, OracleError, Tolerances};
use plate_flow_core::params::{nondimensionalize, validate};
use plate_flow_core::sweep::{figure_preset, Param, Provenance, SweepError, SweepResult, SweepSpec, Trend};
use serde::Serialize;
use thiserror::Error;

use crate::budget::budget_from_env;
use crate::drive::{self, field_symbol, GridChoice, Target};
use crate::format::{self, sig, text_table, FormatError, SCALAR_DIGITS};
use crate::input::{self, InputError, PointParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Parser)]
#[command(name = "plate-flow", version, about = "Closed-form and finite-difference profiles for an accelerated vertical plate")]
#[command(allow_negative_numbers = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one field at one or more points.
    Eval(EvalArgs),
    /// Write the data behind a figure preset.
    Figure(FigureArgs),
    /// Run a one-parameter sweep.
    Sweep(SweepArgs),
    /// Run the verification battery.
    Verify(VerifyArgs),
    /// Convert dimensional inputs to dimensionless groups.
    Nondim(NondimArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct PointFlags {
    /// JSON file with any of Gr, Gc, Pr, Sc, R, K, a, t; flags override it.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long = "Gr")]
    pub gr: Option<f64>,
    #[arg(long = "Gc")]
    pub gc: Option<f64>,
    #[arg(long = "Pr")]
    pub pr: Option<f64>,
    #[arg(long = "Sc")]
    pub sc: Option<f64>,
    #[arg(long = "R")]
    pub radiation: Option<f64>,
    #[arg(long = "K")]
    pub reaction: Option<f64>,
    #[arg(long = "a")]
    pub temp_rate: Option<f64>,
    #[arg(long = "t")]
    pub t: Option<f64>,
}

impl PointFlags {
    fn resolve(&self) -> Result<PointParams, CliError> {
        let base = match &self.params {
            Some(path) => input::read_point_params(path)?,
            None => PointParams::default(),
        };
        Ok(base.overlay(&PointParams {
            gr: self.gr,
            gc: self.gc,
            pr: self.pr,
            sc: self.sc,
            radiation: self.radiation,
            reaction: self.reaction,
            temp_rate: self.temp_rate,
            t: self.t,
        }))
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: FieldKind,
    /// Wall distance; several values may be separated by commas.
    #[arg(long = "Y", required = true, value_delimiter = ',', num_args = 1..)]
    pub y: Vec<f64>,
    #[command(flatten)]
    pub point: PointFlags,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridFlags {
    /// Oracle node spacing.
    #[arg(long)]
    pub dy: Option<f64>,
    /// Oracle time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Oracle domain height.
    #[arg(long = "y-max")]
    pub y_max: Option<f64>,
}

impl GridFlags {
    fn choice(&self) -> GridChoice {
        let d = GridChoice::default();
        GridChoice {
            y_max: self.y_max.unwrap_or(d.y_max),
            dy: self.dy.unwrap_or(d.dy),
            dt: self.dt.unwrap_or(d.dt),
        }
    }
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// Figure preset, 1 to 13.
    #[arg(value_parser = clap::value_parser!(u32).range(1..=13))]
    pub id: u32,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write the full-precision JSON document.
    #[arg(long)]
    pub json: bool,
    /// Compare every profile with the finite-difference oracle.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub grid: GridFlags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Complete sweep specification (JSON); other sweep flags are ignored.
    #[arg(long, conflicts_with_all = ["vary", "values"])]
    pub spec: Option<PathBuf>,
    /// Start from a figure preset; flags below override it.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=13), conflicts_with = "spec")]
    pub preset: Option<u32>,
    /// Parameter to vary: Gr, Gc, Pr, Sc, R, K, a or t.
    #[arg(long, value_parser = parse_param)]
    pub vary: Option<Param>,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub values: Option<Vec<f64>>,
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<FieldKind>,
    /// Sample points on [0, y-end].
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long = "y-end")]
    pub y_end: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub grid: GridFlags,
    #[command(flatten)]
    pub point: PointFlags,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// All thirteen figure presets (the default).
    #[arg(long, conflicts_with_all = ["figure", "preset_file"])]
    pub all: bool,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=13))]
    pub figure: Vec<u32>,
    /// Sweep specification (JSON) to check instead of a built-in preset.
    #[arg(long = "preset-file")]
    pub preset_file: Vec<PathBuf>,
    /// Write the full report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub grid: GridFlags,
}

#[derive(Debug, Args)]
pub struct NondimArgs {
    /// JSON file with the dimensional inputs.
    #[arg(long)]
    pub input: PathBuf,
}

fn parse_kind(s: &str) -> Result<FieldKind, String> {
    s.parse().map_err(|e: analytic::UnknownFieldKind| e.to_string())
}

fn parse_param(s: &str) -> Result<Param, String> {
    s.parse().map_err(|e: plate_flow_core::sweep::UnknownParam| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Verification(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Verification(_) => EXIT_VERIFY,
            CliError::Write { .. } | CliError::Format(_) => EXIT_IO,
        }
    }
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Oracle { .. } => CliError::Verification(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

/// Parse `args` (program name first), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::Eval(a) => eval(a, out),
        Command::Figure(a) => figure(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Nondim(a) => nondim(a, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Write {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

fn deadline() -> Result<Option<Instant>, CliError> {
    let limit = budget_from_env().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(limit.map(|d| Instant::now() + d))
}

fn eval(a: &EvalArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let point = a.point.resolve()?;
    let flow = point.flow().map_err(|e| CliError::Usage(e.to_string()))?;
    let t = point.time().map_err(|e| CliError::Usage(e.to_string()))?;
    let p = validate(&flow).map_err(|e| CliError::Invalid(e.to_string()))?;
    let mut text = String::new();
    for &y in &a.y {
        let v = analytic::evaluate(a.kind, y, t, &p).map_err(|e| CliError::Invalid(e.to_string()))?;
        text.push_str(&sig(v, SCALAR_DIGITS));
        text.push('\n');
    }
    emit(out, &text)
}

/// Provenance kept beside the data files.
#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    command: String,
    label: &'a str,
    provenance: &'a Provenance,
    files: Vec<String>,
}

fn sidecar(command: String, r: &SweepResult, files: Vec<String>) -> Result<String, CliError> {
    Ok(format::to_json(&Sidecar {
        tool: env!("CARGO_PKG_NAME"),
        command,
        label: &r.spec.label,
        provenance: &r.provenance,
        files,
    })?)
}

fn comparison_rows(spec: &SweepSpec, reports: &[ComparisonReport], tol: &Tolerances) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (v, rep) in spec.values.iter().zip(reports) {
        for d in &rep.fields {
            rows.push(vec![
                spec.column_label(*v),
                field_symbol(d.kind).to_string(),
                format!("{:.3e}", d.linf),
                format!("{:.3e}", d.l2),
                sig(d.worst_y, 6),
                format!("{:.0e}", tol.get(d.kind)),
                if d.linf <= tol.get(d.kind) { "pass" } else { "FAIL" }.to_string(),
            ]);
        }
    }
    rows
}

const COMPARISON_HEADER: [&str; 7] = ["value", "field", "linf", "l2", "worst_Y", "limit", "status"];

fn breach_message(spec: &SweepSpec, reports: &[ComparisonReport], tol: &Tolerances) -> Option<String> {
    spec.values
        .iter()
        .zip(reports)
        .flat_map(|(v, rep)| rep.breaches(tol).into_iter().map(move |d| (*v, d)))
        .max_by(|a, b| (a.1.linf / tol.get(a.1.kind)).total_cmp(&(b.1.linf / tol.get(b.1.kind))))
        .map(|(v, d)| {
            format!(
                "oracle disagreement above threshold: {} max |d{}| = {:.3e} > {:.0e} at Y = {}",
                spec.column_label(v),
                field_symbol(d.kind),
                d.linf,
                tol.get(d.kind),
                sig(d.worst_y, 6)
            )
        })
}

fn figure(a: &FigureArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = figure_preset(a.id)?;
    let tol = Tolerances::default();
    let result = if a.verify {
        drive::run_sweep_verified(&spec, &a.grid.choice(), deadline()?)?
    } else {
        drive::run_sweep(&spec)?
    };
    fs::create_dir_all(&a.out).map_err(|source| CliError::Write {
        path: a.out.clone(),
        source,
    })?;
    let stem = format!("figure_{}_{}", a.id, spec.kind);
    let mut files = vec![format!("{stem}.csv")];
    write_file(&a.out.join(&files[0]), &format::sweep_csv(&result)?)?;
    if a.json {
        files.push(format!("{stem}.json"));
        write_file(&a.out.join(&files[1]), &format::sweep_json(&result)?)?;
    }
    let mut report = String::new();
    if a.verify {
        let name = format!("{stem}.verify.json");
        write_file(&a.out.join(&name), &format::to_json(&result.comparisons)?)?;
        files.push(name);
        report = text_table(&COMPARISON_HEADER, &comparison_rows(&spec, &result.comparisons, &tol));
    }
    let meta = format!("{stem}.provenance.json");
    write_file(&a.out.join(&meta), &sidecar(format!("figure {}", a.id), &result, files.clone())?)?;
    files.push(meta);

    let mut text = String::new();
    for f in &files {
        text.push_str(&format!("wrote {}\n", a.out.join(f).display()));
    }
    text.push_str(&report);
    emit(out, &text)?;
    match breach_message(&spec, &result.comparisons, &tol) {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn sweep_spec(a: &SweepArgs) -> Result<SweepSpec, CliError> {
    if let Some(path) = &a.spec {
        return Ok(input::read_json(path)?);
    }
    let preset = a.preset.map(figure_preset).transpose()?;
    let mut point = match &preset {
        Some(s) => PointParams::from((s.base, s.t)),
        None => PointParams::default(),
    };
    point = point.overlay(&a.point.resolve()?);
    let varied = a
        .vary
        .or(preset.as_ref().map(|s| s.varied))
        .ok_or_else(|| CliError::Usage("--vary is required without --preset".into()))?;
    let values = a
        .values
        .clone()
        .or(preset.as_ref().map(|s| s.values.clone()))
        .ok_or_else(|| CliError::Usage("--values is required without --preset".into()))?;
    let kind = a
        .kind
        .or(preset.as_ref().map(|s| s.kind))
        .ok_or_else(|| CliError::Usage("--kind is required without --preset".into()))?;
    // The varied parameter may be omitted from the base.
    let first = values.first().copied();
    let slot = match varied {
        Param::Gr => &mut point.gr,
        Param::Gc => &mut point.gc,
        Param::Pr => &mut point.pr,
        Param::Sc => &mut point.sc,
        Param::R => &mut point.radiation,
        Param::K => &mut point.reaction,
        Param::A => &mut point.temp_rate,
        Param::T => &mut point.t,
    };
    *slot = slot.or(first);
    let base = point.flow().map_err(|e| CliError::Usage(e.to_string()))?;
    let t = point.time().map_err(|e| CliError::Usage(e.to_string()))?;
    let default_ys = || preset.as_ref().map(|s| s.ys.clone());
    let ys = match (a.points, a.y_end) {
        (None, None) => default_ys().unwrap_or_else(|| {
            analytic::uniform_grid(0.0, plate_flow_core::sweep::DEFAULT_Y_END, plate_flow_core::sweep::DEFAULT_Y_POINTS)
        }),
        (n, end) => analytic::uniform_grid(
            0.0,
            end.unwrap_or(plate_flow_core::sweep::DEFAULT_Y_END),
            n.unwrap_or(plate_flow_core::sweep::DEFAULT_Y_POINTS),
        ),
    };
    let trend: Option<Trend> = preset
        .as_ref()
        .filter(|s| s.varied == varied && s.kind == kind)
        .and_then(|s| s.trend);
    let mut spec = SweepSpec {
        base,
        t,
        varied,
        values,
        kind,
        ys,
        label: String::new(),
        trend,
    };
    spec.label = format!("{} for {}", spec.kind, spec.column_labels().join(", "));
    Ok(spec)
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = sweep_spec(a)?;
    let tol = Tolerances::default();
    let result = if a.verify {
        drive::run_sweep_verified(&spec, &a.grid.choice(), deadline()?)?
    } else {
        drive::run_sweep(&spec)?
    };
    let body = match a.format {
        OutputFormat::Csv => format::sweep_csv(&result)?,
        OutputFormat::Json => format::sweep_json(&result)?,
    };
    match &a.out {
        Some(path) => {
            write_file(path, &body)?;
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let meta = path.with_file_name(format!("{name}.provenance.json"));
            write_file(&meta, &sidecar("sweep".into(), &result, vec![name])?)?;
            if a.verify {
                emit(out, &text_table(&COMPARISON_HEADER, &comparison_rows(&spec, &result.comparisons, &tol)))?;
            }
        }
        None => emit(out, &body)?,
    }
    match breach_message(&spec, &result.comparisons, &tol) {
        Some(msg) => Err(CliError::Verification(msg)),
        None => Ok(()),
    }
}

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut targets: Vec<Target> = Vec::new();
    for path in &a.preset_file {
        targets.push(Target {
            name: path.display().to_string(),
            spec: input::read_json(path)?,
        });
    }
    if !a.figure.is_empty() {
        targets.extend(drive::figure_targets(&a.figure)?);
    }
    if targets.is_empty() {
        let all: Vec<u32> = (1..=13).collect();
        targets = drive::figure_targets(&all)?;
    }
    let grid = a.grid.choice();
    grid.for_time(1.0)
        .map_err(|e: OracleError| CliError::Usage(e.to_string()))?;
    let report = drive::run_battery(&targets, &grid, &Tolerances::default(), deadline()?);
    let rows: Vec<Vec<String>> = report
        .outcomes
        .iter()
        .map(|o| {
            vec![
                o.target.clone(),
                o.check.to_string(),
                if o.passed { "pass" } else { "FAIL" }.to_string(),
                o.detail.clone(),
            ]
        })
        .collect();
    let mut text = text_table(&["target", "check", "status", "detail"], &rows);
    let failed = report.failures().count();
    text.push_str(&format!("{} checks, {} failed\n", report.outcomes.len(), failed));
    emit(out, &text)?;
    if let Some(path) = &a.report {
        write_file(path, &format::to_json(&report)?)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{failed} verification check(s) failed")))
    }
}

fn nondim(a: &NondimArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let d = input::read_dimensional(&a.input)?;
    let n = nondimensionalize(&d).map_err(|e| CliError::Invalid(e.to_string()))?;
    emit(out, &format::to_json(&n)?)?;
    validate(&n.params).map_err(|e| CliError::Invalid(format!("dimensionless groups rejected: {e}")))?;
    Ok(())
}
