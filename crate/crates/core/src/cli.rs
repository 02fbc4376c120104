//! Command line front end.
//!
//! Every subcommand writes one data document, CSV or JSON, to `--out` or to
//! stdout. When `--out` is given a sidecar `<out>.meta.json` records the full
//! configuration, the tool version, a report of residuals or drifts, and the
//! only timestamp of the run. CSV floats are written with 17 significant digits.
//!
//! Exit codes: 0 success, 1 usage, 2 domain or parameter errors, 3 numerical failure.

use crate::criticals::{critical_values, min_curve, q_star};
use crate::error::Error;
use crate::evolve::{perturbed_state, reference_profile, run_with, FieldState, RunOptions};
use crate::observables::{
    cuspon_energy_closed, cuspon_momentum_closed, cuspon_observables, energy_closed,
    momentum_closed, observables_quadrature, soliton_observables,
};
use crate::profiles::{
    black_profile, compacton_profile, composite_profile, composite_spec, cuspon_profile,
    residual_first_integral, residual_second_order, soliton_profile, Grid, WaveProfile,
};
use crate::regions::{
    classify_with, require, wave_inventory, Params, Region, Snap, WaveKind, SQRT2,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Version of the JSON documents written by this tool.
pub const SCHEMA_VERSION: u32 = 1;

/// Residual tolerance reported by `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(e) => e.exit_code(),
            CliError::Usage(_) => 1,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Traveling waves of the quasilinear Gross-Pitaevskii equation.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "qgpwave", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "subcommand", rename_all = "lowercase")]
pub enum Command {
    /// Region of (c, kappa) and the waves that exist there.
    Classify(ClassifyArgs),
    /// Sampled profile: x, eta, theta, u_re, u_im.
    Profile(ProfileArgs),
    /// Energy, momentum and their speed derivatives.
    Observables(ObservablesArgs),
    /// Critical dispersion, speeds and momentum for kappa < 0.
    Criticals(CriticalsArgs),
    /// Energy minimization curve: q, E_min, c.
    Curve(CurveArgs),
    /// Time evolution of a soliton: t, E, p, min_rho, mod_distance.
    Evolve(EvolveArgs),
    /// ODE residuals of a sampled profile.
    Verify(VerifyArgs),
    /// Parameter sweeps for figure data.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub kappa: f64,
    /// Do not snap values near sqrt 2 and 1/2 onto the boundary lines.
    #[arg(long)]
    pub exact: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Soliton,
    Black,
    Cuspon,
    Compacton,
    Composite,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = ProfileKind::Soliton)]
    pub kind: ProfileKind,
    /// Central intensity of a composite bubble.
    #[arg(long)]
    pub eta0: Option<f64>,
    /// `|u'(0)|^2` of a composite bubble when it is not fixed by `eta0`.
    #[arg(long)]
    pub k0: Option<f64>,
    /// Compacton index (odd).
    #[arg(long, default_value_t = 1)]
    pub j: u32,
    #[arg(long = "L", default_value_t = 20.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothKind {
    Soliton,
    Cuspon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Closed,
    Quadrature,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ObservablesArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = SmoothKind::Soliton)]
    pub kind: SmoothKind,
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    pub method: MethodArg,
    #[arg(long = "L", default_value_t = 40.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct CriticalsArgs {
    #[arg(long)]
    pub kappa: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct CurveArgs {
    #[arg(long)]
    pub kappa: f64,
    /// Largest momentum; twice the flattening momentum when absent.
    #[arg(long)]
    pub qmax: Option<f64>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct EvolveArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long = "L", default_value_t = 30.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
    /// Time step; capped by the stability bound.
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "T", default_value_t = 1.0)]
    pub t_end: f64,
    /// Amplitude of the bump added to the soliton.
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
    #[arg(long, default_value_t = 0.1)]
    pub record_every: f64,
    /// Directory for state snapshots (x, rho, v) at each recorded time.
    #[arg(long)]
    pub snapshots: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value_t = ProfileKind::Soliton)]
    pub kind: ProfileKind,
    #[arg(long)]
    pub eta0: Option<f64>,
    #[arg(long)]
    pub k0: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub j: u32,
    #[arg(long = "L", default_value_t = 20.0)]
    pub half_width: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    /// (c, E, p) of solitons over (0, sqrt 2).
    Diagram,
    /// Soliton and cuspon energy and momentum over the speed range of kappa.
    EnergyCompare,
    /// Region tags on a (c, kappa) grid.
    RegionMap,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    #[arg(long, default_value_t = -3.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Largest speed of D3 sweeps and of the region map.
    #[arg(long, default_value_t = 3.0)]
    pub c_max: f64,
    #[arg(long, default_value_t = -2.0)]
    pub kappa_min: f64,
    #[arg(long, default_value_t = 2.0)]
    pub kappa_max: f64,
    /// Worker threads; all cores when absent.
    #[arg(long, env = "QGPWAVE_THREADS")]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A CSV or JSON cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

/// Data produced by a subcommand.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Json(Value),
    Table {
        name: &'static str,
        columns: Vec<&'static str>,
        rows: Vec<Vec<Cell>>,
    },
}

/// What a subcommand returns: its document and a report for the sidecar.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Document,
    pub report: Value,
}

fn schema(name: &str) -> String {
    format!("qgpwave.{name}/{SCHEMA_VERSION}")
}

fn with_schema(name: &str, mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(schema(name)));
    }
    v
}

fn params(c: f64, kappa: f64) -> CliResult<Params> {
    Ok(Params::new(c, kappa)?)
}

/// Entry point of the binary; returns the process exit code.
pub fn main_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command line, writing its outputs.
pub fn run(cli: &Cli) -> CliResult<()> {
    let (outcome, output) = execute(cli)?;
    emit(cli, &outcome, output)
}

/// Computes the outcome of a command without writing anything.
pub fn execute(cli: &Cli) -> CliResult<(Outcome, &OutputArgs)> {
    Ok(match &cli.command {
        Command::Classify(a) => (classify_cmd(a)?, &a.output),
        Command::Profile(a) => (profile_cmd(a)?, &a.output),
        Command::Observables(a) => (observables_cmd(a)?, &a.output),
        Command::Criticals(a) => (criticals_cmd(a)?, &a.output),
        Command::Curve(a) => (curve_cmd(a)?, &a.output),
        Command::Evolve(a) => (evolve_cmd(a)?, &a.output),
        Command::Verify(a) => (verify_cmd(a)?, &a.output),
        Command::Sweep(a) => (sweep_cmd(a)?, &a.output),
    })
}

fn classify_cmd(a: &ClassifyArgs) -> CliResult<Outcome> {
    let p = params(a.c, a.kappa)?;
    let region = classify_with(p, if a.exact { Snap::Exact } else { Snap::Tolerant });
    let mut waves = wave_inventory(region);
    if p.c == 0.0 {
        for w in waves.iter_mut().filter(|w| **w == WaveKind::DarkSoliton) {
            *w = WaveKind::BlackSoliton;
        }
    }
    let doc = json!({"c": p.c, "kappa": p.kappa, "region": region, "waves": waves});
    Ok(Outcome {
        document: Document::Json(with_schema("classify", doc)),
        report: json!({}),
    })
}

fn build_profile(
    c: f64,
    kappa: f64,
    kind: ProfileKind,
    eta0: Option<f64>,
    k0: Option<f64>,
    j: u32,
    grid: Grid,
) -> CliResult<WaveProfile> {
    let prof = match kind {
        ProfileKind::Soliton => soliton_profile(params(c, kappa)?, grid)?,
        ProfileKind::Black => black_profile(kappa, grid)?,
        ProfileKind::Cuspon => cuspon_profile(params(c, kappa)?, grid)?,
        ProfileKind::Compacton => {
            require(params(c, kappa)?, &[Region::C], "compacton")?;
            compacton_profile(c, j, grid)?
        }
        ProfileKind::Composite => {
            let eta0 =
                eta0.ok_or_else(|| CliError::Usage("composite profiles need --eta0".into()))?;
            let spec = composite_spec(params(c, kappa)?, eta0, k0)?;
            composite_profile(&spec, grid)?
        }
    };
    Ok(prof)
}

fn residual_report(prof: &WaveProfile) -> Value {
    json!({
        "kind": prof.kind,
        "params": prof.params,
        "h": prof.h,
        "singular_points": prof.singular_points,
        "nondiff_points": prof.nondiff_points,
        "extrema": prof.extrema,
        "residual_first_integral": residual_first_integral(prof),
        "residual_second_order": residual_second_order(prof),
        "collar": 5.0 * prof.h,
    })
}

fn profile_cmd(a: &ProfileArgs) -> CliResult<Outcome> {
    let grid = Grid::new(a.half_width, a.h)?;
    let prof = build_profile(a.c, a.kappa, a.kind, a.eta0, a.k0, a.j, grid)?;
    let rows = (0..prof.len())
        .map(|i| {
            vec![
                Cell::Num(prof.xs[i]),
                Cell::Num(prof.eta[i]),
                Cell::Num(prof.theta[i]),
                Cell::Num(prof.u_re[i]),
                Cell::Num(prof.u_im[i]),
            ]
        })
        .collect();
    Ok(Outcome {
        document: Document::Table {
            name: "profile",
            columns: vec!["x", "eta", "theta", "u_re", "u_im"],
            rows,
        },
        report: residual_report(&prof),
    })
}

fn observables_cmd(a: &ObservablesArgs) -> CliResult<Outcome> {
    let p = params(a.c, a.kappa)?;
    let obs = match (a.kind, a.method) {
        (SmoothKind::Soliton, MethodArg::Closed) => soliton_observables(p)?,
        (SmoothKind::Cuspon, MethodArg::Closed) => cuspon_observables(p)?,
        (kind, MethodArg::Quadrature) => {
            let grid = Grid::new(a.half_width, a.h)?;
            let prof = match kind {
                SmoothKind::Soliton => soliton_profile(p, grid)?,
                SmoothKind::Cuspon => cuspon_profile(p, grid)?,
            };
            observables_quadrature(&prof)?
        }
    };
    let mut doc = serde_json::to_value(obs)?;
    if let Value::Object(m) = &mut doc {
        m.insert("c".into(), json!(p.c));
        m.insert("kappa".into(), json!(p.kappa));
        m.insert("kind".into(), serde_json::to_value(a.kind)?);
    }
    Ok(Outcome {
        document: Document::Json(with_schema("observables", doc)),
        report: json!({}),
    })
}

fn criticals_cmd(a: &CriticalsArgs) -> CliResult<Outcome> {
    let cv = critical_values(a.kappa)?;
    let doc = with_schema("criticals", serde_json::to_value(cv)?);
    Ok(Outcome {
        document: Document::Json(doc),
        report: json!({}),
    })
}

fn curve_cmd(a: &CurveArgs) -> CliResult<Outcome> {
    if a.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let qmax = match a.qmax {
        Some(q) => q,
        None => 2.0 * q_star(a.kappa)?,
    };
    let qs: Vec<f64> = (0..a.n)
        .map(|i| qmax * i as f64 / (a.n - 1) as f64)
        .collect();
    let pts = min_curve(a.kappa, &qs)?;
    let rows = pts
        .iter()
        .map(|p| vec![Cell::Num(p.q), Cell::Num(p.e_min), Cell::from(p.c)])
        .collect();
    Ok(Outcome {
        document: Document::Table {
            name: "curve",
            columns: vec!["q", "E_min", "c"],
            rows,
        },
        report: serde_json::to_value(critical_values(a.kappa)?)?,
    })
}

fn evolve_cmd(a: &EvolveArgs) -> CliResult<Outcome> {
    let p = params(a.c, a.kappa)?;
    require(p, &[Region::D2], "evolution")?;
    let grid = Grid::new(a.half_width, a.h)?;
    let reference = reference_profile(p, grid, a.t_end)?;
    let state = perturbed_state(&reference, grid, a.perturb)?;
    if let Some(dir) = &a.snapshots {
        std::fs::create_dir_all(dir)?;
    }
    let mut snap_err: Option<CliError> = None;
    let mut k = 0usize;
    let opts = RunOptions {
        t_end: a.t_end,
        dt: a.dt,
        record_every: a.record_every,
    };
    let (_, rep) = run_with(state, opts, Some(&reference), |s: &FieldState| {
        if let (Some(dir), None) = (&a.snapshots, &snap_err) {
            if let Err(e) = write_snapshot(&dir.join(format!("snapshot_{k:05}.csv")), s) {
                snap_err = Some(e);
            }
        }
        k += 1;
    })?;
    if let Some(e) = snap_err {
        return Err(e);
    }
    let rows = (0..rep.times.len())
        .map(|i| {
            vec![
                Cell::Num(rep.times[i]),
                Cell::Num(rep.energy[i]),
                Cell::Num(rep.momentum[i]),
                Cell::Num(rep.min_rho[i]),
                Cell::Num(rep.modulated_distance[i]),
            ]
        })
        .collect();
    let report = json!({
        "dt": rep.dt,
        "max_energy_drift": rep.max_energy_drift(),
        "max_momentum_drift": rep.max_momentum_drift(),
        "max_mod_distance": rep.max_distance(),
        "min_rho": rep.lowest_rho(),
    });
    Ok(Outcome {
        document: Document::Table {
            name: "evolve",
            columns: vec!["t", "E", "p", "min_rho", "mod_distance"],
            rows,
        },
        report,
    })
}

fn write_snapshot(path: &Path, s: &FieldState) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "rho", "v"])?;
    for i in 0..s.len() {
        w.write_record([
            Cell::Num(s.xs[i]).csv(),
            Cell::Num(s.rho[i]).csv(),
            Cell::Num(s.v[i]).csv(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn verify_cmd(a: &VerifyArgs) -> CliResult<Outcome> {
    let grid = Grid::new(a.half_width, a.h)?;
    let prof = build_profile(a.c, a.kappa, a.kind, a.eta0, a.k0, a.j, grid)?;
    let mut report = residual_report(&prof);
    let r1 = residual_first_integral(&prof);
    if let Value::Object(m) = &mut report {
        m.insert("tolerance".into(), json!(VERIFY_TOLERANCE));
        m.insert("pass".into(), json!(r1 < VERIFY_TOLERANCE));
    }
    let doc = with_schema("verify", report.clone());
    Ok(Outcome {
        document: Document::Json(doc),
        report,
    })
}

fn thread_pool(threads: Option<usize>) -> CliResult<rayon::ThreadPool> {
    if threads == Some(0) {
        return Err(CliError::Usage("thread count must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))
}

fn sweep_cmd(a: &SweepArgs) -> CliResult<Outcome> {
    if a.n < 2 {
        return Err(CliError::Usage("--n must be at least 2".into()));
    }
    let pool = thread_pool(a.threads)?;
    let n = a.n;
    let k = a.kappa;
    let (name, columns, rows): (&'static str, Vec<&'static str>, Vec<Vec<Cell>>) = match a.figure {
        Figure::Diagram => {
            let rows = pool.install(|| {
                (1..=n)
                    .into_par_iter()
                    .map(|i| {
                        let c = SQRT2 * i as f64 / (n + 1) as f64;
                        let p = Params::new(c, k)?;
                        Ok(vec![
                            Cell::Num(c),
                            Cell::Num(energy_closed(p)?),
                            Cell::Num(momentum_closed(p)?),
                        ])
                    })
                    .collect::<crate::Result<Vec<_>>>()
            })?;
            ("diagram", vec!["c", "E", "p"], rows)
        }
        Figure::EnergyCompare => {
            let (lo, hi) = if k > 0.0 && k < 0.5 {
                (0.0, SQRT2)
            } else if k > 0.5 {
                if !(a.c_max > SQRT2) {
                    return Err(
                        Error::Param(format!("need c_max > sqrt 2, got {}", a.c_max)).into(),
                    );
                }
                (SQRT2, a.c_max)
            } else {
                return Err(Error::Region(format!("solitons and cuspons coexist only for kappa in (0, 1/2) or kappa > 1/2, got {k}")).into());
            };
            let rows = pool.install(|| {
                (1..=n)
                    .into_par_iter()
                    .map(|i| {
                        let c = lo + (hi - lo) * i as f64 / (n + 1) as f64;
                        let p = Params::new(c, k)?;
                        Ok(vec![
                            Cell::Num(c),
                            Cell::Num(energy_closed(p)?),
                            Cell::Num(momentum_closed(p)?),
                            Cell::Num(cuspon_energy_closed(p)?),
                            Cell::Num(cuspon_momentum_closed(p)?),
                        ])
                    })
                    .collect::<crate::Result<Vec<_>>>()
            })?;
            (
                "energy-compare",
                vec!["c", "E_soliton", "p_soliton", "E_cuspon", "p_cuspon"],
                rows,
            )
        }
        Figure::RegionMap => {
            if !(a.kappa_max > a.kappa_min) || !(a.c_max > 0.0) {
                return Err(Error::Param("need kappa_min < kappa_max and c_max > 0".into()).into());
            }
            let rows = pool.install(|| {
                (0..n * n)
                    .into_par_iter()
                    .map(|idx| {
                        let (i, j) = (idx / n, idx % n);
                        let c = a.c_max * i as f64 / (n - 1) as f64;
                        let kk =
                            a.kappa_min + (a.kappa_max - a.kappa_min) * j as f64 / (n - 1) as f64;
                        let r = classify_with(Params::new(c, kk)?, Snap::Tolerant);
                        Ok(vec![
                            Cell::Num(c),
                            Cell::Num(kk),
                            Cell::Text(format!("{r:?}")),
                        ])
                    })
                    .collect::<crate::Result<Vec<_>>>()
            })?;
            ("region-map", vec!["c", "kappa", "region"], rows)
        }
    };
    Ok(Outcome {
        document: Document::Table {
            name,
            columns,
            rows,
        },
        report: json!({"points": n}),
    })
}

/// Serializes a document in the requested format.
pub fn render(doc: &Document, format: Option<Format>) -> CliResult<Vec<u8>> {
    match doc {
        Document::Json(v) => {
            if format == Some(Format::Csv) {
                return Err(CliError::Usage("this subcommand only writes JSON".into()));
            }
            let mut s = serde_json::to_vec_pretty(v)?;
            s.push(b'\n');
            Ok(s)
        }
        Document::Table {
            name,
            columns,
            rows,
        } => match format.unwrap_or(Format::Csv) {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(columns)?;
                for r in rows {
                    w.write_record(r.iter().map(Cell::csv))?;
                }
                w.into_inner().map_err(|e| CliError::Io(e.into_error()))
            }
            Format::Json => {
                let data: Vec<Value> = rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                let v = json!({"schema": schema(name), "columns": columns, "rows": data});
                let mut s = serde_json::to_vec_pretty(&v)?;
                s.push(b'\n');
                Ok(s)
            }
        },
    }
}

fn emit(cli: &Cli, outcome: &Outcome, output: &OutputArgs) -> CliResult<()> {
    let bytes = render(&outcome.document, output.format)?;
    match &output.out {
        None => {
            std::io::stdout().write_all(&bytes)?;
        }
        Some(path) => {
            std::fs::write(path, &bytes)?;
            let created = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            let meta = json!({
                "schema": schema("meta"),
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "created_unix": created,
                "config": cli,
                "report": outcome.report,
            });
            let mut side = path.clone().into_os_string();
            side.push(".meta.json");
            std::fs::write(PathBuf::from(side), serde_json::to_vec_pretty(&meta)?)?;
        }
    }
    Ok(())
}
