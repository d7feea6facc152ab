//! Mean dimension estimators.
//!
//! [`estimate_pick_freeze`] uses the Sobol' identity
//! `ν(f) = (1/2σ²) E Σ_j (f(x) − f(x_{−j}:z_j))²` on a `2d`-dimensional
//! point set (`x` = coordinates `0..d`, `z` = coordinates `d..2d`).
//! [`estimate_symmetric_3d`] handles the equal-weight direction
//! `θ_j = 1/√d`, where exchangeability collapses the expectation to a
//! three-dimensional integral whose cost does not depend on `d`.
//!
//! Replicate `r` draws its points with seed [`replicate_seed`]`(seed, r)`;
//! estimates are the mean over replicates and the standard error is the
//! sample standard deviation over `√replicates`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ridge::{jump_moments, kink_moments, preintegrated_profile, InputDomain, Integrand, Profile};
use crate::sampling::{derive_seed, gaussian_of, DirectionNumbers, PrngSampler, Sampler, SobolGenerator};
use crate::special::{gauss_cdf_integrals, norm_cdf, step_variance, Quadrature};

/// Largest dimension the pick-freeze estimator accepts.
pub const PICK_FREEZE_MAX_DIM: usize = 1 << 20;

/// Variances at or below this are treated as zero.
pub const DEGENERATE_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplerKind {
    ScrambledSobol,
    Prng,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sigma2Mode {
    /// Exact variance when the integrand has one, else the sample variance.
    ClosedForm,
    /// Sample variance of `f(x)` over the replicate's points.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimatorKind {
    PickFreeze,
    /// Pick-freeze for jumps with `x_j` and `z_j` integrated out exactly.
    PickFreezeConditioned,
    Symmetric3d,
    /// Symmetric estimator for jumps with the shared coordinate integrated
    /// out in closed form.
    Symmetric3dConditioned,
}

impl EstimatorKind {
    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::PickFreeze => "pickfreeze",
            EstimatorKind::PickFreezeConditioned => "pickfreeze-cond",
            EstimatorKind::Symmetric3d => "sym3d",
            EstimatorKind::Symmetric3dConditioned => "sym3d-cond",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EstimatorConfig {
    /// Points per replicate; a power of two, at least 16.
    pub n_points: u64,
    pub replicates: usize,
    pub seed: u64,
    pub sampler: SamplerKind,
    pub sigma2_mode: Sigma2Mode,
    /// For jump integrands, integrate the resampled coordinate (pick-freeze)
    /// or the shared coordinate (symmetric estimator) out analytically.
    /// Same expectation, far lower variance; turn off to get the plain
    /// estimators. Needs a closed-form variance, so it is skipped under
    /// [`Sigma2Mode::Sample`].
    pub conditioning: bool,
    /// Direction numbers for Sobol' points; `None` uses the embedded table.
    pub direction_numbers: Option<Arc<DirectionNumbers>>,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            n_points: 1 << 15,
            replicates: 5,
            seed: 1,
            sampler: SamplerKind::ScrambledSobol,
            sigma2_mode: Sigma2Mode::ClosedForm,
            conditioning: true,
            direction_numbers: None,
        }
    }
}

/// Seed used by replicate `r`, see [`derive_seed`].
pub fn replicate_seed(seed: u64, r: usize) -> u64 {
    derive_seed(seed, r as u64)
}

impl EstimatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 16 || !self.n_points.is_power_of_two() {
            return Err(Error::Usage(format!(
                "n_points must be a power of two and at least 16, got {}",
                self.n_points
            )));
        }
        if self.replicates == 0 {
            return Err(Error::Usage("replicates must be at least 1".into()));
        }
        Ok(())
    }

    /// The point source for replicate `r` in `dim` dimensions.
    pub fn sampler(&self, dim: usize, r: usize) -> Result<Sampler> {
        let seed = replicate_seed(self.seed, r);
        match self.sampler {
            SamplerKind::ScrambledSobol => {
                let numbers = match &self.direction_numbers {
                    Some(dn) => dn.as_ref(),
                    None => DirectionNumbers::embedded(),
                };
                Ok(Sampler::Sobol(SobolGenerator::new(numbers, dim)?.scrambled(seed)))
            }
            SamplerKind::Prng => Ok(Sampler::Prng(PrngSampler::new(seed, dim)?)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateMeta {
    pub d: usize,
    pub n_points: u64,
    pub seed: u64,
    pub replicates: usize,
    pub kind: EstimatorKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanDimEstimate {
    pub nu_hat: f64,
    pub per_replicate: Vec<f64>,
    /// Sample standard deviation of `per_replicate` over `√replicates`; 0
    /// for a single replicate.
    pub std_error: f64,
    /// Mean over replicates of `Σ_j τ̄²_j`.
    pub numerator_hat: f64,
    /// Mean over replicates of the variance each replicate divided by.
    pub sigma2_used: f64,
    pub meta: EstimateMeta,
}

/// Mean and standard error (`sd/√n`, 0 when `n = 1`).
pub fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

impl MeanDimEstimate {
    fn from_replicates(nu: Vec<f64>, numerators: &[f64], sigma2: &[f64], meta: EstimateMeta) -> Self {
        let (nu_hat, std_error) = mean_and_std_error(&nu);
        MeanDimEstimate {
            nu_hat,
            per_replicate: nu,
            std_error,
            numerator_hat: mean_and_std_error(numerators).0,
            sigma2_used: mean_and_std_error(sigma2).0,
            meta,
        }
    }
}

/// One replicate of the pick-freeze estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateTotals {
    /// `τ̄²_j = ½ mean (f(x) − f(x_{−j}:z_j))²`.
    pub tau: Vec<f64>,
    pub sigma2: f64,
    /// `Σ_j τ̄²_j`.
    pub numerator: f64,
    /// `numerator / sigma2`.
    pub nu: f64,
}

struct PickFreezeAcc {
    diff2: Vec<f64>,
    out: Vec<f64>,
    n: u64,
    mean: f64,
    m2: f64,
}

impl PickFreezeAcc {
    fn new(d: usize) -> Self {
        PickFreezeAcc {
            diff2: vec![0.0; d],
            out: vec![0.0; d],
            n: 0,
            mean: 0.0,
            m2: 0.0,
        }
    }

    #[inline]
    fn push_conditioned<F: Integrand + ?Sized>(&mut self, f: &F, x: &[f64]) {
        f.conditional_sq_diff(x, &mut self.out);
        for (acc, &v) in self.diff2.iter_mut().zip(&self.out) {
            *acc += v;
        }
        self.n += 1;
    }

    #[inline]
    fn push<F: Integrand + ?Sized>(&mut self, f: &F, x: &[f64], z: &[f64]) {
        let f0 = f.eval_pick_freeze(x, z, &mut self.out);
        for (acc, &fj) in self.diff2.iter_mut().zip(&self.out) {
            let diff = f0 - fj;
            *acc += diff * diff;
        }
        self.n += 1;
        let delta = f0 - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (f0 - self.mean);
    }

    fn finish(self, closed: Option<f64>, mode: Sigma2Mode) -> Result<ReplicateTotals> {
        let n = self.n as f64;
        let sigma2 = match (mode, closed) {
            (Sigma2Mode::ClosedForm, Some(s2)) => s2,
            _ => self.m2 / (n - 1.0),
        };
        check_variance(sigma2)?;
        let tau: Vec<f64> = self.diff2.iter().map(|s| 0.5 * s / n).collect();
        let numerator: f64 = tau.iter().sum();
        Ok(ReplicateTotals {
            nu: numerator / sigma2,
            tau,
            sigma2,
            numerator,
        })
    }
}

fn check_variance(sigma2: f64) -> Result<()> {
    if sigma2 > DEGENERATE_VARIANCE {
        Ok(())
    } else {
        Err(Error::Degenerate { sigma2 })
    }
}

fn check_pick_freeze_dim(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Usage("integrand dimension must be at least 1".into()));
    }
    if d > PICK_FREEZE_MAX_DIM {
        return Err(Error::Capacity(format!(
            "pick-freeze supports d <= 2^20, got {d}; use the symmetric estimator"
        )));
    }
    Ok(())
}

#[inline]
fn to_domain(domain: InputDomain, u: &[f64], out: &mut [f64]) {
    match domain {
        InputDomain::Gaussian => {
            for (o, &v) in out.iter_mut().zip(u) {
                *o = gaussian_of(v);
            }
        }
        InputDomain::Uniform => out.copy_from_slice(u),
    }
}

/// Points of one replicate, already mapped to an input domain, kept in
/// memory so several integrands can share them.
#[derive(Debug, Clone)]
pub struct PreparedSample {
    dim: usize,
    domain: InputDomain,
    values: Vec<f64>,
}

impl PreparedSample {
    pub fn draw(cfg: &EstimatorConfig, dim: usize, domain: InputDomain, r: usize) -> Result<Self> {
        cfg.validate()?;
        let sampler = cfg.sampler(dim, r)?;
        let mut values = Vec::with_capacity(dim * cfg.n_points as usize);
        let mut buf = vec![0.0; dim];
        sampler.for_each_point(cfg.n_points, |_, u| {
            to_domain(domain, u, &mut buf);
            values.extend_from_slice(&buf);
        })?;
        Ok(PreparedSample { dim, domain, values })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn domain(&self) -> InputDomain {
        self.domain
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }
}

/// Whether `cfg` runs the conditioned pick-freeze estimator on `f`.
pub fn uses_conditioning<F: Integrand + ?Sized>(f: &F, cfg: &EstimatorConfig) -> bool {
    cfg.conditioning
        && cfg.sigma2_mode == Sigma2Mode::ClosedForm
        && f.supports_conditioning()
        && f.closed_form_moments().is_some()
}

/// Dimension of the point set a pick-freeze replicate of `f` consumes:
/// `2d` normally, `d` when conditioned.
pub fn pick_freeze_sample_dim<F: Integrand + ?Sized>(f: &F, cfg: &EstimatorConfig) -> usize {
    if uses_conditioning(f, cfg) {
        f.dim()
    } else {
        2 * f.dim()
    }
}

/// One pick-freeze replicate, drawing points on the fly.
pub fn pick_freeze_replicate<F: Integrand + ?Sized>(f: &F, cfg: &EstimatorConfig, r: usize) -> Result<ReplicateTotals> {
    cfg.validate()?;
    let d = f.dim();
    check_pick_freeze_dim(d)?;
    let conditioned = uses_conditioning(f, cfg);
    let dim = pick_freeze_sample_dim(f, cfg);
    let sampler = cfg.sampler(dim, r)?;
    let domain = f.domain();
    let mut acc = PickFreezeAcc::new(d);
    let mut buf = vec![0.0; dim];
    sampler.for_each_point(cfg.n_points, |_, u| {
        to_domain(domain, u, &mut buf);
        if conditioned {
            acc.push_conditioned(f, &buf);
        } else {
            acc.push(f, &buf[..d], &buf[d..]);
        }
    })?;
    acc.finish(f.closed_form_moments().map(|m| m.1), cfg.sigma2_mode)
}

/// One pick-freeze replicate on a prepared sample of dimension
/// [`pick_freeze_sample_dim`]. Matches [`pick_freeze_replicate`] exactly
/// when the sample was drawn with the same config and replicate index.
pub fn pick_freeze_on<F: Integrand + ?Sized>(f: &F, sample: &PreparedSample, cfg: &EstimatorConfig) -> Result<ReplicateTotals> {
    let d = f.dim();
    check_pick_freeze_dim(d)?;
    let conditioned = uses_conditioning(f, cfg);
    let dim = pick_freeze_sample_dim(f, cfg);
    if sample.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: sample.dim(),
        });
    }
    if sample.domain() != f.domain() {
        return Err(Error::Usage("prepared sample was drawn for a different input domain".into()));
    }
    let mut acc = PickFreezeAcc::new(d);
    for row in sample.rows() {
        if conditioned {
            acc.push_conditioned(f, row);
        } else {
            acc.push(f, &row[..d], &row[d..]);
        }
    }
    acc.finish(f.closed_form_moments().map(|m| m.1), cfg.sigma2_mode)
}

/// Combines per-replicate pick-freeze results.
pub fn aggregate_pick_freeze(reps: &[ReplicateTotals], meta: EstimateMeta) -> MeanDimEstimate {
    let nu: Vec<f64> = reps.iter().map(|r| r.nu).collect();
    let num: Vec<f64> = reps.iter().map(|r| r.numerator).collect();
    let s2: Vec<f64> = reps.iter().map(|r| r.sigma2).collect();
    MeanDimEstimate::from_replicates(nu, &num, &s2, meta)
}

/// Metadata for a pick-freeze estimate of `f` under `cfg`.
pub fn pick_freeze_meta<F: Integrand + ?Sized>(f: &F, cfg: &EstimatorConfig) -> EstimateMeta {
    EstimateMeta {
        d: f.dim(),
        n_points: cfg.n_points,
        seed: cfg.seed,
        replicates: cfg.replicates,
        kind: if uses_conditioning(f, cfg) {
            EstimatorKind::PickFreezeConditioned
        } else {
            EstimatorKind::PickFreeze
        },
    }
}

/// Pick-freeze estimate of `ν(f)` over `cfg.replicates` replicates.
pub fn estimate_pick_freeze<F: Integrand + ?Sized>(f: &F, cfg: &EstimatorConfig) -> Result<MeanDimEstimate> {
    cfg.validate()?;
    let reps = (0..cfg.replicates)
        .map(|r| pick_freeze_replicate(f, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate_pick_freeze(&reps, pick_freeze_meta(f, cfg)))
}

/// Per-coordinate total indices `τ̄²_j` from the same sample paths as
/// [`estimate_pick_freeze`].
#[derive(Debug, Clone, PartialEq)]
pub struct TotalIndexProfile {
    pub tau_hat: Vec<f64>,
    pub std_error: Vec<f64>,
    pub replicates: Vec<ReplicateTotals>,
}

pub fn total_index_profile<F: Integrand + ?Sized>(f: &F, cfg: &EstimatorConfig) -> Result<TotalIndexProfile> {
    cfg.validate()?;
    let reps = (0..cfg.replicates)
        .map(|r| pick_freeze_replicate(f, cfg, r))
        .collect::<Result<Vec<_>>>()?;
    let d = f.dim();
    let mut tau_hat = Vec::with_capacity(d);
    let mut std_error = Vec::with_capacity(d);
    for j in 0..d {
        let col: Vec<f64> = reps.iter().map(|r| r.tau[j]).collect();
        let (m, se) = mean_and_std_error(&col);
        tau_hat.push(m);
        std_error.push(se);
    }
    Ok(TotalIndexProfile {
        tau_hat,
        std_error,
        replicates: reps,
    })
}

/// The scalar function `g` and its exact variance (if known) for the
/// symmetric estimator, after reducing a preintegrated jump to `d − 1`
/// equal weights.
fn symmetric_setup(profile: &Profile, d: usize) -> Result<(Box<dyn Fn(f64) -> f64 + Send + Sync>, Option<f64>, usize)> {
    match profile {
        Profile::Kink { t } => {
            let t = *t;
            Ok((Box::new(move |y: f64| (y - t).max(0.0)), Some(kink_moments(t).1), d))
        }
        Profile::Jump { t } => {
            let t = *t;
            Ok((Box::new(move |y: f64| if y > t { 1.0 } else { 0.0 }), Some(jump_moments(t).1), d))
        }
        Profile::PreintegratedJump { t, .. } => {
            if d < 2 {
                return Err(Error::Degenerate { sigma2: 0.0 });
            }
            // Integrating one of d equal weights leaves d − 1 equal weights
            // and ḡ(y) = Φ(a + b y).
            let theta_l = 1.0 / (d as f64).sqrt();
            let g = preintegrated_profile(theta_l, *t)?;
            let a = -t / theta_l;
            let b = (1.0 - theta_l * theta_l).sqrt() / theta_l;
            let (m1, m2) = gauss_cdf_integrals(a, b)?;
            Ok((Box::new(move |y: f64| g.eval(y)), Some((m2 - m1 * m1).max(0.0)), d - 1))
        }
        Profile::Custom(c) => {
            let c = c.clone();
            Ok((Box::new(move |y: f64| c.eval(y)), None, d))
        }
    }
}

fn quadrature_variance(g: &(dyn Fn(f64) -> f64 + Send + Sync)) -> Result<f64> {
    let q = Quadrature::default();
    let m1 = q.integrate_gaussian(g, &[])?;
    let m2 = q.integrate_gaussian(|y| g(y) * g(y), &[])?;
    Ok(m2 - m1 * m1)
}

/// Symmetric three-dimensional estimator for `g(θᵀx)` with `θ_j = 1/√d`:
/// `ν = (d/2σ²) E[(g((√(d−1)x+y)/√d) − g((√(d−1)x+z)/√d))²]`.
///
/// Works for any `d ≥ 1` (including far beyond pick-freeze's reach). For
/// jumps with `conditioning` on and a closed-form variance, `x` is
/// integrated out exactly: the squared difference averages to
/// `|Φ(−c_y) − Φ(−c_z)|` with `c_y = (t√d − y)/√(d−1)`, leaving a smooth
/// two-dimensional integrand (at `d = 1`, where nothing is shared, `y` and
/// `z` are integrated out instead and the result is exact). A preintegrated jump is handled as the ridge
/// function it is on the remaining `d − 1` coordinates.
pub fn estimate_symmetric_3d(profile: &Profile, d: usize, cfg: &EstimatorConfig) -> Result<MeanDimEstimate> {
    cfg.validate()?;
    if d == 0 {
        return Err(Error::Usage("dimension must be at least 1".into()));
    }
    let (g, closed, dim) = symmetric_setup(profile, d)?;
    let sigma2_closed = match (cfg.sigma2_mode, closed) {
        (Sigma2Mode::ClosedForm, Some(s2)) => Some(s2),
        (Sigma2Mode::ClosedForm, None) => Some(quadrature_variance(g.as_ref())?),
        (Sigma2Mode::Sample, _) => None,
    };
    let conditioned = match (profile, sigma2_closed) {
        (Profile::Jump { t }, Some(_)) if cfg.conditioning => Some(*t),
        _ => None,
    };
    let kind = if conditioned.is_some() {
        EstimatorKind::Symmetric3dConditioned
    } else {
        EstimatorKind::Symmetric3d
    };

    let df = dim as f64;
    let shared = ((df - 1.0) / df).sqrt();
    let own = 1.0 / df.sqrt();
    let mut nu = Vec::with_capacity(cfg.replicates);
    let mut nums = Vec::with_capacity(cfg.replicates);
    let mut s2s = Vec::with_capacity(cfg.replicates);
    for r in 0..cfg.replicates {
        let mut sum = 0.0;
        let mut n = 0u64;
        let (mut mean, mut m2) = (0.0, 0.0);
        if let (Some(t), 1) = (conditioned, dim) {
            // No shared coordinate: integrate y and z out instead.
            sum = 2.0 * step_variance(t) * cfg.n_points as f64;
            n = cfg.n_points;
        } else if let Some(t) = conditioned {
            let scale = 1.0 / (df - 1.0).sqrt();
            let shift = t * df.sqrt();
            cfg.sampler(2, r)?.for_each_gaussian(cfg.n_points, |_, p| {
                let cy = (shift - p[0]) * scale;
                let cz = (shift - p[1]) * scale;
                // Take the difference on the side where both tails are small.
                let diff = if cy + cz >= 0.0 {
                    norm_cdf(-cy) - norm_cdf(-cz)
                } else {
                    norm_cdf(cz) - norm_cdf(cy)
                };
                sum += diff.abs();
                n += 1;
            })?;
        } else {
            cfg.sampler(3, r)?.for_each_gaussian(cfg.n_points, |_, p| {
                let base = shared * p[0];
                let f0 = g(base + own * p[1]);
                let f1 = g(base + own * p[2]);
                let diff = f0 - f1;
                sum += diff * diff;
                n += 1;
                let delta = f0 - mean;
                mean += delta / n as f64;
                m2 += delta * (f0 - mean);
            })?;
        }
        let sigma2 = match sigma2_closed {
            Some(s2) => s2,
            None => m2 / (n as f64 - 1.0),
        };
        check_variance(sigma2)?;
        let mean_sq = sum / n as f64;
        // Σ_j τ̄²_j = d · ½ E[diff²] by exchangeability.
        let numerator = 0.5 * df * mean_sq;
        nums.push(numerator);
        s2s.push(sigma2);
        nu.push(numerator / sigma2);
    }
    Ok(MeanDimEstimate::from_replicates(
        nu,
        &nums,
        &s2s,
        EstimateMeta {
            d,
            n_points: cfg.n_points,
            seed: cfg.seed,
            replicates: cfg.replicates,
            kind,
        },
    ))
}
