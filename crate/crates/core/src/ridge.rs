//! Integrands: Gaussian ridge functions `g(θᵀx)` with kink, jump,
//! preintegrated-jump or user profiles, ridge functions of orthonormal
//! projections, and the cusp family on the unit cube.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::special::{gauss_cdf_integrals, log_gamma, norm_cdf, norm_pdf, step_variance, FRAC_1_SQRT_2PI};

/// Tolerance on `|‖θ‖₂ − 1|` for a [`UnitVector`].
pub const UNIT_TOL: f64 = 1e-12;

/// Tolerance on `ΘᵀΘ = I` (entrywise) for a [`ProjectionMatrix`].
pub const ORTHO_TOL: f64 = 1e-10;

/// Distribution of the integrand's inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputDomain {
    /// Independent standard normals.
    Gaussian,
    /// Independent uniforms on [0, 1].
    Uniform,
}

/// A square-integrable function of independent inputs.
pub trait Integrand: Send + Sync {
    fn dim(&self) -> usize;

    fn domain(&self) -> InputDomain;

    /// `f(x)`. `x.len()` must equal [`Integrand::dim`].
    fn eval(&self, x: &[f64]) -> f64;

    /// Exact `(mean, variance)` when known.
    fn closed_form_moments(&self) -> Option<(f64, f64)> {
        None
    }

    /// Returns `f(x)` and writes `f(x_{-j} : z_j)` (coordinate `j` of `x`
    /// replaced by `z_j`) into `out[j]` for every `j`.
    ///
    /// The default re-evaluates `f` `d` times, costing `O(d²)`; ridge and
    /// cusp integrands override it with an `O(d)` update.
    fn eval_pick_freeze(&self, x: &[f64], z: &[f64], out: &mut [f64]) -> f64 {
        let mut buf = x.to_vec();
        for j in 0..x.len() {
            buf[j] = z[j];
            out[j] = self.eval(&buf);
            buf[j] = x[j];
        }
        self.eval(x)
    }

    /// Whether [`Integrand::conditional_sq_diff`] is available.
    fn supports_conditioning(&self) -> bool {
        false
    }

    /// Writes `E[(f(x) − f(x_{-j} : z_j))² | x_{-j}]` into `out[j]`, with
    /// both `x_j` and `z_j` integrated out exactly. Only called when
    /// [`Integrand::supports_conditioning`] is true.
    fn conditional_sq_diff(&self, _x: &[f64], _out: &mut [f64]) {
        unimplemented!("integrand has no conditional pick-freeze form")
    }
}

/// A direction `θ` with `‖θ‖₂ = 1`, caching `‖θ‖₁` and `‖θ‖∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    entries: Vec<f64>,
    l1: f64,
    linf: f64,
}

impl UnitVector {
    /// Validates that `entries` already has unit length.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidVector("a direction needs at least one entry".into()));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidVector("entries must be finite".into()));
        }
        let norm2 = kahan_sum(entries.iter().map(|v| v * v)).sqrt();
        if (norm2 - 1.0).abs() > UNIT_TOL {
            return Err(Error::InvalidVector(format!(
                "Euclidean norm is {norm2:.17}, not 1 within {UNIT_TOL:e}"
            )));
        }
        let l1 = kahan_sum(entries.iter().map(|v| v.abs()));
        let linf = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(UnitVector { entries, l1, linf })
    }

    /// Scales `entries` to unit length.
    pub fn normalize(entries: Vec<f64>) -> Result<Self> {
        let norm2 = kahan_sum(entries.iter().map(|v| v * v)).sqrt();
        if !(norm2 > 0.0) || !norm2.is_finite() {
            return Err(Error::InvalidVector("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(entries.into_iter().map(|v| v / norm2).collect())
    }

    /// `θ_j = 1/√d`, the least sparse direction.
    pub fn equal(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidVector("dimension must be at least 1".into()));
        }
        Self::new(vec![1.0 / (d as f64).sqrt(); d])
    }

    /// Coordinate vector `e_k` (0-based `k`).
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::InvalidVector(format!("basis index {k} outside 0..{d}")));
        }
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        Self::new(e)
    }

    /// `θ_1 = v1`, remaining `d − 1` entries equal and positive.
    pub fn one_big(d: usize, v1: f64) -> Result<Self> {
        if !(v1 > 0.0 && v1 <= 1.0) {
            return Err(Error::InvalidVector(format!("leading entry {v1} outside (0, 1]")));
        }
        if d == 1 {
            return if v1 == 1.0 {
                Self::new(vec![1.0])
            } else {
                Err(Error::InvalidVector("a 1-dimensional unit vector has entry 1".into()))
            };
        }
        if d == 0 {
            return Err(Error::InvalidVector("dimension must be at least 1".into()));
        }
        let rest = ((1.0 - v1 * v1) / (d - 1) as f64).sqrt();
        let mut e = vec![rest; d];
        e[0] = v1;
        Self::new(e)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn linf(&self) -> f64 {
        self.linf
    }

    /// Index of the entry with largest magnitude (first one on ties).
    pub fn argmax_abs(&self) -> usize {
        let mut best = 0;
        for (j, v) in self.entries.iter().enumerate() {
            if v.abs() > self.entries[best].abs() {
                best = j;
            }
        }
        best
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.entries.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// A `d × r` matrix with orthonormal columns, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    d: usize,
    r: usize,
    data: Vec<f64>,
}

impl ProjectionMatrix {
    pub fn new(d: usize, r: usize, data: Vec<f64>) -> Result<Self> {
        if r == 0 || r > d {
            return Err(Error::InvalidVector(format!("need 1 <= r <= d, got d = {d}, r = {r}")));
        }
        if data.len() != d * r {
            return Err(Error::DimensionMismatch {
                expected: d * r,
                got: data.len(),
            });
        }
        for a in 0..r {
            for b in a..r {
                let g: f64 = (0..d).map(|j| data[j * r + a] * data[j * r + b]).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                if (g - target).abs() > ORTHO_TOL {
                    return Err(Error::InvalidVector(format!(
                        "columns are not orthonormal: (ΘᵀΘ)[{a}][{b}] = {g}"
                    )));
                }
            }
        }
        Ok(ProjectionMatrix { d, r, data })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Row `j`, i.e. `Θ_{j·}`.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.r..(j + 1) * self.r]
    }

    /// `Σ_k Θ_{jk}²` for every row `j`.
    pub fn row_norms_squared(&self) -> Vec<f64> {
        (0..self.d).map(|j| self.row(j).iter().map(|v| v * v).sum()).collect()
    }
}

impl From<&UnitVector> for ProjectionMatrix {
    fn from(theta: &UnitVector) -> Self {
        ProjectionMatrix {
            d: theta.dim(),
            r: 1,
            data: theta.entries().to_vec(),
        }
    }
}

/// A user-supplied scalar profile with a display name.
#[derive(Clone)]
pub struct CustomProfile {
    name: String,
    g: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl CustomProfile {
    pub fn new(name: impl Into<String>, g: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CustomProfile {
            name: name.into(),
            g: Arc::new(g),
        }
    }

    /// `g(y) = y`, whose ridge functions are additive (mean dimension 1).
    pub fn identity() -> Self {
        Self::new("identity", |y| y)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn eval(&self, y: f64) -> f64 {
        (self.g)(y)
    }
}

impl fmt::Debug for CustomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CustomProfile({})", self.name)
    }
}

/// The function `g` of a ridge integrand `g(θᵀx)`.
#[derive(Debug, Clone)]
pub enum Profile {
    /// `(y − t)₊`
    Kink { t: f64 },
    /// `1{y > t}`
    Jump { t: f64 },
    /// The jump integrated exactly over coordinate `ell` (0-based).
    PreintegratedJump { t: f64, ell: usize },
    Custom(CustomProfile),
}

impl Profile {
    pub fn name(&self) -> &str {
        match self {
            Profile::Kink { .. } => "kink",
            Profile::Jump { .. } => "jump",
            Profile::PreintegratedJump { .. } => "preint-jump",
            Profile::Custom(c) => c.name(),
        }
    }

    pub fn threshold(&self) -> Option<f64> {
        match *self {
            Profile::Kink { t } | Profile::Jump { t } | Profile::PreintegratedJump { t, .. } => Some(t),
            Profile::Custom(_) => None,
        }
    }
}

/// `(μ, σ²)` of `(Y − t)₊` for `Y ~ N(0,1)`.
pub fn kink_moments(t: f64) -> (f64, f64) {
    let pdf = norm_pdf(t);
    let upper = norm_cdf(-t);
    let mu = pdf - t * upper;
    let second = upper * (1.0 + t * t) - t * pdf;
    (mu, second - mu * mu)
}

/// `(μ, σ²)` of `1{Y > t}` for `Y ~ N(0,1)`.
pub fn jump_moments(t: f64) -> (f64, f64) {
    (norm_cdf(-t), step_variance(t))
}

/// `(μ, σ²)` of the cusp `(Σx_j − (d−1))₊^p` on `[0,1]^d`.
///
/// Uses `E f^q = Γ(q+1)/Γ(q+d+1)` in log space, so large `d` and `p` do
/// not overflow. For `d = 1, p = 0` the function is constant and `σ² = 0`.
pub fn cusp_moments(d: usize, p: f64) -> Result<(f64, f64)> {
    check_cusp(d, p)?;
    let mu = cusp_raw_moment(d, p)?;
    let second = cusp_raw_moment(d, 2.0 * p)?;
    Ok((mu, (second - mu * mu).max(0.0)))
}

fn cusp_raw_moment(d: usize, q: f64) -> Result<f64> {
    Ok((log_gamma(q + 1.0)? - log_gamma(q + d as f64 + 1.0)?).exp())
}

fn check_cusp(d: usize, p: f64) -> Result<()> {
    if d == 0 {
        return Err(Error::domain("cusp", 0.0, "d >= 1"));
    }
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::domain("cusp", p, "p >= 0"));
    }
    Ok(())
}

/// `g(θᵀx)` for a unit direction `θ` and Gaussian inputs.
#[derive(Debug, Clone)]
pub struct RidgeIntegrand {
    direction: UnitVector,
    profile: Profile,
    /// Weights actually applied to `x`: `θ`, with entry `ell` zeroed for a
    /// preintegrated jump.
    weights: Vec<f64>,
    /// `1/|θ_ell|` for a preintegrated jump.
    inv_scale: f64,
}

impl RidgeIntegrand {
    pub fn new(direction: UnitVector, profile: Profile) -> Result<Self> {
        let mut weights = direction.entries().to_vec();
        let mut inv_scale = 1.0;
        if let Profile::PreintegratedJump { ell, .. } = profile {
            let theta_l = *weights.get(ell).ok_or(Error::InvalidPreintegration { index: ell })?;
            if theta_l == 0.0 {
                return Err(Error::InvalidPreintegration { index: ell });
            }
            inv_scale = 1.0 / theta_l.abs();
            weights[ell] = 0.0;
        }
        Ok(RidgeIntegrand {
            direction,
            profile,
            weights,
            inv_scale,
        })
    }

    pub fn kink(direction: UnitVector, t: f64) -> Self {
        Self::new(direction, Profile::Kink { t }).expect("kink has no preconditions")
    }

    pub fn jump(direction: UnitVector, t: f64) -> Self {
        Self::new(direction, Profile::Jump { t }).expect("jump has no preconditions")
    }

    pub fn custom(direction: UnitVector, g: CustomProfile) -> Self {
        Self::new(direction, Profile::Custom(g)).expect("custom profile has no preconditions")
    }

    pub fn direction(&self) -> &UnitVector {
        &self.direction
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// The scalar function applied to `Σ_j weights_j x_j`.
    #[inline]
    fn apply(&self, s: f64) -> f64 {
        match &self.profile {
            Profile::Kink { t } => (s - t).max(0.0),
            Profile::Jump { t } => {
                if s > *t {
                    1.0
                } else {
                    0.0
                }
            }
            Profile::PreintegratedJump { t, .. } => norm_cdf((s - t) * self.inv_scale),
            Profile::Custom(g) => g.eval(s),
        }
    }

    /// Exact `(μ, σ²)`; custom profiles have none.
    pub fn moments(&self) -> Result<(f64, f64)> {
        match self.profile {
            Profile::Kink { t } => Ok(kink_moments(t)),
            Profile::Jump { t } => Ok(jump_moments(t)),
            Profile::PreintegratedJump { t, ell } => {
                let theta_l = self.direction.entries()[ell].abs();
                if theta_l == 1.0 {
                    return Ok((norm_cdf(-t), 0.0));
                }
                // ḡ(y) = Φ(a + b y) with y ~ N(0,1).
                let a = -t / theta_l;
                let b = (1.0 - theta_l * theta_l).sqrt() / theta_l;
                let (m1, m2) = gauss_cdf_integrals(a, b)?;
                Ok((m1, (m2 - m1 * m1).max(0.0)))
            }
            Profile::Custom(_) => Err(Error::NoClosedForm("a custom ridge profile")),
        }
    }
}

impl Integrand for RidgeIntegrand {
    fn dim(&self) -> usize {
        self.weights.len()
    }

    fn domain(&self) -> InputDomain {
        InputDomain::Gaussian
    }

    fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.weights.len());
        let s: f64 = self.weights.iter().zip(x).map(|(w, v)| w * v).sum();
        self.apply(s)
    }

    fn closed_form_moments(&self) -> Option<(f64, f64)> {
        self.moments().ok()
    }

    fn eval_pick_freeze(&self, x: &[f64], z: &[f64], out: &mut [f64]) -> f64 {
        let s: f64 = self.weights.iter().zip(x).map(|(w, v)| w * v).sum();
        let f0 = self.apply(s);
        for (j, o) in out.iter_mut().enumerate() {
            let w = self.weights[j];
            // Zero weights leave the value bit-identical.
            *o = if w == 0.0 { f0 } else { self.apply(s + w * (z[j] - x[j])) };
        }
        f0
    }

    fn supports_conditioning(&self) -> bool {
        matches!(self.profile, Profile::Jump { .. })
    }

    fn conditional_sq_diff(&self, x: &[f64], out: &mut [f64]) {
        let Profile::Jump { t } = self.profile else {
            unimplemented!("only jump profiles have a conditional pick-freeze form")
        };
        let s: f64 = self.weights.iter().zip(x).map(|(w, v)| w * v).sum();
        for ((o, &w), &xj) in out.iter_mut().zip(&self.weights).zip(x) {
            // Given the rest, each copy crosses t independently with
            // probability Φ(u), so they disagree with probability 2Φ(u)Φ(−u).
            *o = if w == 0.0 {
                0.0
            } else {
                2.0 * step_variance((s - w * xj - t) / w.abs())
            };
        }
    }
}

/// `g(Θᵀx)` for an orthonormal `d × r` projection and a user function of `r`
/// variables. Estimation only; no closed forms.
#[derive(Clone)]
pub struct ProjectionRidge {
    theta: ProjectionMatrix,
    g: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl ProjectionRidge {
    pub fn new(theta: ProjectionMatrix, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ProjectionRidge { theta, g: Arc::new(g) }
    }

    pub fn projection(&self) -> &ProjectionMatrix {
        &self.theta
    }

    fn project(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for (j, &xj) in x.iter().enumerate() {
            for (yk, &t) in y.iter_mut().zip(self.theta.row(j)) {
                *yk += t * xj;
            }
        }
    }
}

impl fmt::Debug for ProjectionRidge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProjectionRidge")
            .field("d", &self.theta.d())
            .field("r", &self.theta.r())
            .finish()
    }
}

impl Integrand for ProjectionRidge {
    fn dim(&self) -> usize {
        self.theta.d()
    }

    fn domain(&self) -> InputDomain {
        InputDomain::Gaussian
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.theta.r()];
        self.project(x, &mut y);
        (self.g)(&y)
    }

    fn eval_pick_freeze(&self, x: &[f64], z: &[f64], out: &mut [f64]) -> f64 {
        let r = self.theta.r();
        let mut y = vec![0.0; r];
        self.project(x, &mut y);
        let mut moved = vec![0.0; r];
        for (j, o) in out.iter_mut().enumerate() {
            let dz = z[j] - x[j];
            for (m, (yk, t)) in moved.iter_mut().zip(y.iter().zip(self.theta.row(j))) {
                *m = yk + t * dz;
            }
            *o = (self.g)(&moved);
        }
        (self.g)(&y)
    }
}

/// The cusp `f_{d,p}(x) = (Σx_j − (d−1))₊^p` on `[0,1]^d`; `p = 0` is the
/// indicator `1{Σx_j > d−1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspIntegrand {
    d: usize,
    p: f64,
}

impl CuspIntegrand {
    pub fn new(d: usize, p: f64) -> Result<Self> {
        check_cusp(d, p)?;
        Ok(CuspIntegrand { d, p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    fn apply(&self, s: f64) -> f64 {
        let excess = s - (self.d - 1) as f64;
        if excess <= 0.0 {
            0.0
        } else if self.p == 0.0 {
            1.0
        } else {
            excess.powf(self.p)
        }
    }

    pub fn moments(&self) -> Result<(f64, f64)> {
        cusp_moments(self.d, self.p)
    }
}

impl Integrand for CuspIntegrand {
    fn dim(&self) -> usize {
        self.d
    }

    fn domain(&self) -> InputDomain {
        InputDomain::Uniform
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.apply(x.iter().sum())
    }

    fn closed_form_moments(&self) -> Option<(f64, f64)> {
        self.moments().ok()
    }

    fn eval_pick_freeze(&self, x: &[f64], z: &[f64], out: &mut [f64]) -> f64 {
        let s: f64 = x.iter().sum();
        for (j, o) in out.iter_mut().enumerate() {
            *o = self.apply(s + (z[j] - x[j]));
        }
        self.apply(s)
    }
}

/// Checked ridge evaluation.
pub fn eval_ridge(f: &RidgeIntegrand, x: &[f64]) -> Result<f64> {
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            got: x.len(),
        });
    }
    Ok(f.eval(x))
}

/// Checked cusp evaluation; coordinates must lie in `[0, 1]`.
pub fn eval_cusp(c: &CuspIntegrand, x: &[f64]) -> Result<f64> {
    if x.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            got: x.len(),
        });
    }
    if let Some(&bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::domain("eval_cusp", bad, "coordinates in [0, 1]"));
    }
    Ok(c.eval(x))
}

/// Integrates a jump ridge function exactly over coordinate `ell`.
///
/// The result depends on `x` only through `Σ_{k≠ell} θ_k x_k`; equivalently
/// it is the ridge function `ḡ(θ*ᵀx)` with `θ*` the direction with entry
/// `ell` removed and renormalized, and
/// `ḡ(y) = Φ((√(1−θ_ell²) y − t)/|θ_ell|)`.
pub fn preintegrate(f: &RidgeIntegrand, ell: usize) -> Result<RidgeIntegrand> {
    match f.profile {
        Profile::Jump { t } => RidgeIntegrand::new(f.direction.clone(), Profile::PreintegratedJump { t, ell }),
        _ => Err(Error::Usage(format!(
            "only jump integrands can be preintegrated, got `{}`",
            f.profile.name()
        ))),
    }
}

/// Lipschitz constant `φ(0)√(1−θ_ell²)/|θ_ell|` of the preintegrated profile `ḡ`.
pub fn preint_lipschitz_constant(theta: &UnitVector, ell: usize) -> Result<f64> {
    let v = *theta.entries().get(ell).ok_or(Error::InvalidPreintegration { index: ell })?;
    if v == 0.0 {
        return Err(Error::InvalidPreintegration { index: ell });
    }
    let v = v.abs();
    Ok(FRAC_1_SQRT_2PI * (1.0 - v * v).max(0.0).sqrt() / v)
}

/// The preintegrated profile `ḡ(y)` as a scalar function of `y = θ*ᵀx`.
pub fn preintegrated_profile(theta_l: f64, t: f64) -> Result<CustomProfile> {
    if theta_l == 0.0 || !theta_l.is_finite() || theta_l.abs() > 1.0 {
        return Err(Error::domain("preintegrated_profile", theta_l, "0 < |theta_l| <= 1"));
    }
    let a = theta_l.abs();
    let c = (1.0 - a * a).sqrt();
    Ok(CustomProfile::new("preint-jump", move |y| norm_cdf((c * y - t) / a)))
}
