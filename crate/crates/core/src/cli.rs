//! Command-line front end: `estimate`, `analytic`, `bounds` and `figure`.
//!
//! Estimates are written as CSV with one row per `(d, replicate)`; the
//! header is the field list of [`ResultRow`]. Exit codes: 0 success,
//! 2 usage error, 3 numeric or degeneracy error, 4 I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::analytic::{cusp_mean_dimension, jump_exact_t0, kink_upper_bound, preint_mean_dimension_general, BoundReport};
use crate::error::{Error, Result};
use crate::meandim::{
    estimate_pick_freeze, estimate_symmetric_3d, EstimatorConfig, MeanDimEstimate, SamplerKind, Sigma2Mode,
};
use crate::ridge::{CuspIntegrand, Profile, RidgeIntegrand, UnitVector};
use crate::sampling::DirectionNumbers;

#[derive(Parser, Debug)]
#[command(name = "meandim", version, about = "Mean dimension of Gaussian ridge functions")]
pub struct Cli {
    /// Joe-Kuo direction number file (falls back to $MEANDIM_DIRNUMS, then
    /// the embedded table).
    #[arg(long, global = true)]
    pub dirnums: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Points per replicate (power of two).
    #[arg(long, global = true, default_value_t = 1 << 15)]
    pub n: u64,
    #[arg(long, global = true, default_value_t = 5)]
    pub replicates: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = SamplerArg::Sobol)]
    pub sampler: SamplerArg,
    #[arg(long, global = true, value_enum, default_value_t = Sigma2Arg::Closed)]
    pub sigma2: Sigma2Arg,
    /// Use the plain estimators even for jumps.
    #[arg(long, global = true)]
    pub no_conditioning: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Estimate ν for one integrand over a list of dimensions.
    Estimate(EstimateArgs),
    /// Print a closed-form value.
    Analytic(AnalyticArgs),
    /// Print lower bound, exact value and upper bound.
    Bounds(BoundsArgs),
    /// Regenerate the kink or jump growth curves.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Sobol,
    Prng,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Sigma2Arg {
    Closed,
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    Kink,
    Jump,
    Preint,
    Cusp,
}

impl FunctionArg {
    fn name(self) -> &'static str {
        match self {
            FunctionArg::Kink => "kink",
            FunctionArg::Jump => "jump",
            FunctionArg::Preint => "preint",
            FunctionArg::Cusp => "cusp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    Pickfreeze,
    Sym3d,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalyticKind {
    /// Exact ν of `1{θᵀx > 0}`.
    JumpT0,
    /// Exact ν of the cusp `(Σx_j − (d−1))₊^p` on the unit cube.
    Cusp,
    /// Upper bound `1/σ²(t)` for kinks.
    KinkBound,
    /// Exact ν of the preintegrated jump.
    Preint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    Kinks,
    Jumps,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct EstimateArgs {
    #[arg(value_enum)]
    pub function: FunctionArg,
    /// Dimensions: `4`, `2,8,32`, `1..8` or `2^2..2^10`.
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Cusp order.
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    /// `equal`, `one-big:v1`, or an explicit comma-separated unit vector.
    #[arg(long, default_value = "equal", allow_hyphen_values = true)]
    pub theta: String,
    /// Integrated coordinate for `preint`.
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Pickfreeze)]
    pub estimator: EstimatorArg,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct AnalyticArgs {
    #[arg(value_enum)]
    pub quantity: AnalyticKind,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value = "equal", allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct BoundsArgs {
    #[arg(value_enum)]
    pub function: FunctionArg,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value = "equal", allow_hyphen_values = true)]
    pub theta: String,
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
}

#[derive(Args, Debug)]
#[command(allow_negative_numbers = true)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub which: FigureKind,
    #[arg(long, default_value = "2^2..2^20")]
    pub d: String,
    /// Thresholds, comma separated. Defaults: `2,0,-2` for kinks, `2,0` for
    /// jumps.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    #[arg(long, value_enum, default_value_t = EstimatorArg::Sym3d)]
    pub estimator: EstimatorArg,
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub function: String,
    pub t_or_p: f64,
    pub d: usize,
    pub replicate: usize,
    pub nu_estimate: f64,
    pub std_error: f64,
    pub estimator: String,
    pub n_points: u64,
    pub seed: u64,
    pub analytic_exact: Option<f64>,
    pub bound_lower: Option<f64>,
    pub bound_upper: Option<f64>,
}

/// Direction choice for ridge integrands.
#[derive(Debug, Clone, PartialEq)]
pub enum ThetaMode {
    Equal,
    OneBig(f64),
    Explicit(Vec<f64>),
}

impl ThetaMode {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "equal" {
            return Ok(ThetaMode::Equal);
        }
        if let Some(v) = s.strip_prefix("one-big:") {
            let v1 = v
                .trim()
                .parse()
                .map_err(|_| Error::Usage(format!("bad one-big value {v:?}")))?;
            return Ok(ThetaMode::OneBig(v1));
        }
        let entries = s
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Usage(format!("--theta must be equal, one-big:v1 or a number list, got {s:?}")))?;
        Ok(ThetaMode::Explicit(entries))
    }

    pub fn vector(&self, d: usize) -> Result<UnitVector> {
        match self {
            ThetaMode::Equal => UnitVector::equal(d),
            ThetaMode::OneBig(v1) => UnitVector::one_big(d, *v1),
            ThetaMode::Explicit(v) => {
                if v.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: v.len(),
                    });
                }
                UnitVector::new(v.clone())
            }
        }
    }
}

fn parse_dim(s: &str) -> Result<(usize, bool)> {
    let bad = || Error::Usage(format!("bad dimension {s:?}"));
    let s = s.trim();
    if let Some(k) = s.strip_prefix("2^") {
        let k: u32 = k.parse().map_err(|_| bad())?;
        if k > 40 {
            return Err(bad());
        }
        Ok((1usize << k, true))
    } else {
        Ok((s.parse().map_err(|_| bad())?, false))
    }
}

/// Parses `--d`: comma-separated items, each `N`, `2^k`, `a..b` (every
/// integer) or `2^a..2^b` (every power of two).
pub fn parse_d_list(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in s.split(',') {
        if let Some((a, b)) = item.split_once("..") {
            let ((lo, lo_pow), (hi, hi_pow)) = (parse_dim(a)?, parse_dim(b)?);
            if lo > hi {
                return Err(Error::Usage(format!("empty range {item:?}")));
            }
            if lo_pow && hi_pow {
                let mut d = lo;
                while d <= hi {
                    out.push(d);
                    d <<= 1;
                }
            } else {
                out.extend(lo..=hi);
            }
        } else {
            out.push(parse_dim(item)?.0);
        }
    }
    if out.is_empty() || out.contains(&0) {
        return Err(Error::Usage(format!("dimensions must be positive, got {s:?}")));
    }
    Ok(out)
}

fn parse_t_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|t| t.is_finite())
                .ok_or_else(|| Error::Usage(format!("bad threshold {x:?}")))
        })
        .collect()
}

/// Dimensions implied by `--d` and `--theta` together.
fn resolve_dims(d: Option<&str>, theta: &ThetaMode) -> Result<Vec<usize>> {
    match (d, theta) {
        (Some(d), ThetaMode::Explicit(v)) => {
            let ds = parse_d_list(d)?;
            if let Some(&bad) = ds.iter().find(|&&x| x != v.len()) {
                return Err(Error::DimensionMismatch {
                    expected: v.len(),
                    got: bad,
                });
            }
            Ok(ds)
        }
        (None, ThetaMode::Explicit(v)) => Ok(vec![v.len()]),
        (Some(d), _) => parse_d_list(d),
        (None, _) => Err(Error::Usage("--d is required".into())),
    }
}

fn config(cli: &Cli) -> Result<EstimatorConfig> {
    let direction_numbers = match cli.sampler {
        SamplerArg::Sobol => Some(Arc::new(DirectionNumbers::resolve(cli.dirnums.as_deref())?)),
        SamplerArg::Prng => None,
    };
    let cfg = EstimatorConfig {
        n_points: cli.n,
        replicates: cli.replicates,
        seed: cli.seed,
        sampler: match cli.sampler {
            SamplerArg::Sobol => SamplerKind::ScrambledSobol,
            SamplerArg::Prng => SamplerKind::Prng,
        },
        sigma2_mode: match cli.sigma2 {
            Sigma2Arg::Closed => Sigma2Mode::ClosedForm,
            Sigma2Arg::Sample => Sigma2Mode::Sample,
        },
        conditioning: !cli.no_conditioning,
        direction_numbers,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// One integrand instance: what to estimate and how to label it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub function: FunctionArg,
    pub d: usize,
    pub t: f64,
    pub p: f64,
    pub theta: ThetaMode,
    pub ell: usize,
}

impl Cell {
    fn profile(&self) -> Profile {
        match self.function {
            FunctionArg::Kink => Profile::Kink { t: self.t },
            FunctionArg::Jump => Profile::Jump { t: self.t },
            FunctionArg::Preint => Profile::PreintegratedJump { t: self.t, ell: self.ell },
            FunctionArg::Cusp => unreachable!("cusps are not ridge functions"),
        }
    }

    fn t_or_p(&self) -> f64 {
        if self.function == FunctionArg::Cusp {
            self.p
        } else {
            self.t
        }
    }

    /// Lower bound, exact value and upper bound, as far as they exist.
    pub fn report(&self) -> Result<BoundReport> {
        match self.function {
            FunctionArg::Kink => BoundReport::kink(self.t),
            FunctionArg::Jump => BoundReport::jump(&self.theta.vector(self.d)?, self.t),
            FunctionArg::Preint => BoundReport::preint(&self.theta.vector(self.d)?, self.t, self.ell),
            FunctionArg::Cusp => BoundReport::cusp(self.d, self.p),
        }
    }

    pub fn estimate(&self, estimator: EstimatorArg, cfg: &EstimatorConfig) -> Result<MeanDimEstimate> {
        match (estimator, self.function) {
            (EstimatorArg::Pickfreeze, FunctionArg::Cusp) => estimate_pick_freeze(&CuspIntegrand::new(self.d, self.p)?, cfg),
            (EstimatorArg::Pickfreeze, _) => {
                let f = RidgeIntegrand::new(self.theta.vector(self.d)?, self.profile())?;
                estimate_pick_freeze(&f, cfg)
            }
            (EstimatorArg::Sym3d, FunctionArg::Cusp) => {
                Err(Error::Usage("the symmetric estimator needs a Gaussian ridge function".into()))
            }
            (EstimatorArg::Sym3d, _) => {
                if self.theta != ThetaMode::Equal {
                    return Err(Error::Usage("the symmetric estimator needs --theta equal".into()));
                }
                estimate_symmetric_3d(&self.profile(), self.d, cfg)
            }
        }
    }

    /// CSV rows for one estimate. Bound columns stay empty where the
    /// formulas do not apply.
    pub fn rows(&self, est: &MeanDimEstimate) -> Vec<ResultRow> {
        let report = self.report().ok();
        let lower = report.as_ref().and_then(|r| r.lower.map(|b| b.value));
        let exact = report.as_ref().and_then(|r| r.exact.map(|b| b.value));
        let upper = report.as_ref().and_then(|r| r.upper.map(|b| b.value));
        est.per_replicate
            .iter()
            .enumerate()
            .map(|(replicate, &nu)| ResultRow {
                function: self.function.name().to_string(),
                t_or_p: self.t_or_p(),
                d: self.d,
                replicate,
                nu_estimate: nu,
                std_error: est.std_error,
                estimator: est.meta.kind.name().to_string(),
                n_points: est.meta.n_points,
                seed: est.meta.seed,
                analytic_exact: exact,
                bound_lower: lower,
                bound_upper: upper,
            })
            .collect()
    }
}

/// Writes rows as CSV with LF line endings.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .has_headers(false)
        .from_writer(out);
    w.write_record([
        "function",
        "t_or_p",
        "d",
        "replicate",
        "nu_estimate",
        "std_error",
        "estimator",
        "n_points",
        "seed",
        "analytic_exact",
        "bound_lower",
        "bound_upper",
    ])?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn emit_rows(rows: &[ResultRow], out_path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out_path {
        Some(p) => {
            let file = File::create(p).map_err(io_error(p))?;
            write_csv(rows, io::BufWriter::new(file))?;
            writeln!(stdout, "wrote {} rows to {}", rows.len(), p.display()).map_err(io_error(Path::new("<stdout>")))
        }
        None => write_csv(rows, stdout),
    }
}

fn emit_text(text: &str, out_path: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    write!(stdout, "{text}").map_err(io_error(Path::new("<stdout>")))?;
    if let Some(p) = out_path {
        std::fs::write(p, text).map_err(io_error(p))?;
    }
    Ok(())
}

/// Rows of a figure run, sorted by `(t, d, replicate)`.
///
/// Grid cells whose estimate fails (for example a zero-variance integrand)
/// are skipped with a warning rather than aborting the run.
pub fn run_figure(which: FigureKind, ts: &[f64], ds: &[usize], estimator: EstimatorArg, cfg: &EstimatorConfig) -> Result<Vec<ResultRow>> {
    let function = match which {
        FigureKind::Kinks => FunctionArg::Kink,
        FigureKind::Jumps => FunctionArg::Jump,
    };
    let mut ts = ts.to_vec();
    ts.sort_by(f64::total_cmp);
    let mut ds = ds.to_vec();
    ds.sort_unstable();
    ds.dedup();
    let mut rows = Vec::new();
    for &t in &ts {
        for &d in &ds {
            let cell = Cell {
                function,
                d,
                t,
                p: 0.0,
                theta: ThetaMode::Equal,
                ell: 0,
            };
            match cell.estimate(estimator, cfg) {
                Ok(est) => rows.extend(cell.rows(&est)),
                Err(e @ (Error::Degenerate { .. } | Error::Capacity(_))) => {
                    eprintln!("skipping t={t} d={d}: {e}");
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(rows)
}

/// Kink curves, `t ∈ {2, 0, −2}` by default.
pub fn run_figure_kinks(ds: &[usize], cfg: &EstimatorConfig) -> Result<Vec<ResultRow>> {
    run_figure(FigureKind::Kinks, &[2.0, 0.0, -2.0], ds, EstimatorArg::Sym3d, cfg)
}

/// Jump curves, `t ∈ {2, 0}` by default.
pub fn run_figure_jumps(ds: &[usize], cfg: &EstimatorConfig) -> Result<Vec<ResultRow>> {
    run_figure(FigureKind::Jumps, &[2.0, 0.0], ds, EstimatorArg::Sym3d, cfg)
}

fn analytic_value(kind: AnalyticKind, d: usize, a: &AnalyticArgs, theta: &ThetaMode) -> Result<f64> {
    match kind {
        AnalyticKind::JumpT0 => Ok(jump_exact_t0(&theta.vector(d)?)),
        AnalyticKind::Cusp => cusp_mean_dimension(d, a.p),
        AnalyticKind::KinkBound => Ok(kink_upper_bound(a.t)),
        AnalyticKind::Preint => preint_mean_dimension_general(&theta.vector(d)?, a.t, a.ell),
    }
}

/// Runs a parsed command, writing human-readable output to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let out = cli.out.as_deref();
    match &cli.command {
        Command::Estimate(a) => {
            let cfg = config(cli)?;
            let theta = ThetaMode::parse(&a.theta)?;
            let ds = if a.function == FunctionArg::Cusp {
                parse_d_list(a.d.as_deref().ok_or_else(|| Error::Usage("--d is required".into()))?)?
            } else {
                resolve_dims(a.d.as_deref(), &theta)?
            };
            let mut rows = Vec::new();
            for d in ds {
                let cell = Cell {
                    function: a.function,
                    d,
                    t: a.t,
                    p: a.p,
                    theta: theta.clone(),
                    ell: a.ell,
                };
                let est = cell.estimate(a.estimator, &cfg)?;
                rows.extend(cell.rows(&est));
            }
            emit_rows(&rows, out, stdout)
        }
        Command::Analytic(a) => {
            let theta = ThetaMode::parse(&a.theta)?;
            let text = if a.quantity == AnalyticKind::KinkBound {
                format!("{:.6}\n", kink_upper_bound(a.t))
            } else {
                let ds = match a.quantity {
                    AnalyticKind::Cusp => {
                        parse_d_list(a.d.as_deref().ok_or_else(|| Error::Usage("--d is required".into()))?)?
                    }
                    _ => resolve_dims(a.d.as_deref(), &theta)?,
                };
                let mut text = String::new();
                for &d in &ds {
                    let v = analytic_value(a.quantity, d, a, &theta)?;
                    if ds.len() == 1 {
                        text.push_str(&format!("{v:.6}\n"));
                    } else {
                        text.push_str(&format!("{d} {v:.6}\n"));
                    }
                }
                text
            };
            emit_text(&text, out, stdout)
        }
        Command::Bounds(a) => {
            let theta = ThetaMode::parse(&a.theta)?;
            let ds = match a.function {
                FunctionArg::Kink => vec![a.d.as_deref().map(parse_d_list).transpose()?.map_or(1, |v| v[0])],
                FunctionArg::Cusp => {
                    parse_d_list(a.d.as_deref().ok_or_else(|| Error::Usage("--d is required".into()))?)?
                }
                _ => resolve_dims(a.d.as_deref(), &theta)?,
            };
            let mut text = String::new();
            for &d in &ds {
                let cell = Cell {
                    function: a.function,
                    d,
                    t: a.t,
                    p: a.p,
                    theta: theta.clone(),
                    ell: a.ell,
                };
                if ds.len() > 1 {
                    text.push_str(&format!("d = {d}\n"));
                }
                text.push_str(&cell.report()?.to_string());
            }
            emit_text(&text, out, stdout)
        }
        Command::Figure(a) => {
            let cfg = config(cli)?;
            let ds = parse_d_list(&a.d)?;
            let ts = match (&a.t, a.which) {
                (Some(t), _) => parse_t_list(t)?,
                (None, FigureKind::Kinks) => vec![2.0, 0.0, -2.0],
                (None, FigureKind::Jumps) => vec![2.0, 0.0],
            };
            let rows = run_figure(a.which, &ts, &ds, a.estimator, &cfg)?;
            emit_rows(&rows, out, stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs; returns the exit
/// code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
