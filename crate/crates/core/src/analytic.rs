//! Exact mean dimensions and bounds for the integrands in [`crate::ridge`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, SQRT_2};
use std::fmt;

use crate::error::{Error, Result};
use crate::ridge::{kink_moments, ProjectionMatrix, UnitVector};
use crate::special::{abs_moment, log_gamma, step_variance, Quadrature, FRAC_1_SQRT_2PI};

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("alpha", alpha, "0 < alpha <= 1"))
    }
}

fn check_positive(what: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(what, v, "positive and finite"))
    }
}

/// Upper bound for `g(Θᵀx)` with `g` α-Hölder with constant `C`:
/// `(C/σ)² 2^{α−1} M_{2α} Σ_j (Σ_k Θ_jk²)^α`.
pub fn holder_bound(c: f64, alpha: f64, theta: &ProjectionMatrix, sigma2: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("C", c)?;
    check_positive("sigma2", sigma2)?;
    let sum: f64 = theta.row_norms_squared().iter().map(|s| s.powf(alpha)).sum();
    Ok(c * c / sigma2 * 2f64.powf(alpha - 1.0) * abs_moment(2.0 * alpha)? * sum)
}

/// [`holder_bound`] at its worst case over directions, `r = 1` and
/// `θ_j = 1/√d`: the sum becomes `d^{1−α}`.
pub fn holder_bound_least_sparse(c: f64, alpha: f64, d: usize, sigma2: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("C", c)?;
    check_positive("sigma2", sigma2)?;
    if d == 0 {
        return Err(Error::domain("d", 0.0, "d >= 1"));
    }
    Ok(c * c / sigma2 * 2f64.powf(alpha - 1.0) * abs_moment(2.0 * alpha)? * (d as f64).powf(1.0 - alpha))
}

/// Hölder bound with a spatially varying constant `C(y)`:
/// `2^{α−1} E(C(y)^{2p})^{1/p} M_{2αq}^{1/q} Σ_j ‖Θ_j·‖^{2α} / σ²`, `q = p/(p−1)`.
///
/// `moment_c2p` is `E(C(y)^{2p})^{1/p}`, supplied by the caller. `p = ∞`
/// is accepted (then `q = 1` and `moment_c2p` is `sup C²`).
pub fn spatial_holder_bound(
    moment_c2p: f64,
    p: f64,
    alpha: f64,
    theta: &ProjectionMatrix,
    sigma2: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    check_positive("sigma2", sigma2)?;
    if !(p > 1.0) {
        return Err(Error::domain("p", p, "p > 1 (p = 1 makes q infinite)"));
    }
    if !(moment_c2p >= 0.0) || !moment_c2p.is_finite() {
        return Err(Error::domain("moment_c2p", moment_c2p, "nonnegative and finite"));
    }
    let q = if p.is_infinite() { 1.0 } else { p / (p - 1.0) };
    let m = abs_moment(2.0 * alpha * q)?.powf(1.0 / q);
    let sum: f64 = theta.row_norms_squared().iter().map(|s| s.powf(alpha)).sum();
    Ok(2f64.powf(alpha - 1.0) * moment_c2p * m * sum / sigma2)
}

/// Kink profiles are 1-Lipschitz, so [`holder_bound`] with `C = α = 1`
/// gives `1/σ²(t)` for every direction.
pub fn kink_upper_bound(t: f64) -> f64 {
    1.0 / kink_moments(t).1
}

fn check_threshold(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("t", t, "t >= 0 (use |t|; the mean dimension is symmetric in t)"))
    }
}

/// Upper bound for `1{θᵀx > t}`:
/// `‖θ‖₁/(Φ(t)Φ(−t)√(2π)) · (√2 + 2√(ln(d/‖θ‖₁)))`.
pub fn jump_upper_bound(theta: &UnitVector, t: f64) -> Result<f64> {
    check_threshold(t)?;
    let d = theta.dim();
    if d < 2 {
        return Err(Error::domain("jump_upper_bound", d as f64, "d >= 2"));
    }
    let l1 = theta.l1();
    let log_term = (d as f64 / l1).ln().max(0.0);
    Ok(l1 * FRAC_1_SQRT_2PI / step_variance(t) * (SQRT_2 + 2.0 * log_term.sqrt()))
}

/// Lower bound for `1{θᵀx > t}`: `‖θ‖₁ e^{−t²−1}/(Φ(t)Φ(−t) 2^{3/2} π)`.
pub fn jump_lower_bound(theta: &UnitVector, t: f64) -> Result<f64> {
    check_threshold(t)?;
    Ok(theta.l1() * (-t * t - 1.0).exp() / (step_variance(t) * 2.0 * SQRT_2 * PI))
}

/// Lower bound on `P(x > t, y < t)` for standard bivariate normals with
/// correlation `ρ ≥ 0`: `(1/2π) √((1−ρ)/(1+ρ)) exp(−t²/(1+ρ) − 1)`.
pub fn bivariate_lower_bound(rho: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::domain("rho", rho, "0 <= rho <= 1"));
    }
    check_threshold(t)?;
    Ok(((1.0 - rho) / (1.0 + rho)).sqrt() * (-t * t / (1.0 + rho) - 1.0).exp() / (2.0 * PI))
}

/// Exact mean dimension of `1{θᵀx > 0}`.
///
/// Swapping coordinate `j` leaves `θᵀx` correlated at `ρ_j = 1 − θ_j²`, and
/// the two signs disagree with probability `arccos(ρ_j)/π`, so
/// `ν = (2/π) Σ_j arccos(1 − θ_j²) = (4/π) Σ_j arcsin(|θ_j|/√2)`. The
/// arcsine form is used since it stays accurate for tiny `θ_j`.
/// Note this is not `(2/π) Σ_j arcsin|θ_j|`, which gives 1 for
/// `1{x₁ + x₂ > 0}`; see `tests/analytic_oracles.rs`.
pub fn jump_exact_t0(theta: &UnitVector) -> f64 {
    let s: f64 = theta
        .entries()
        .iter()
        .map(|v| (v.abs().min(1.0) * FRAC_1_SQRT_2).asin())
        .sum();
    4.0 / PI * s
}

/// Exact mean dimension of the cusp `(Σx_j − (d−1))₊^p` on `[0,1]^d`.
///
/// Evaluated as `d (1 − r₁)/(1 − r₂)` with
/// `r₁ = 2(2p+1)/((p+1)(2p+d+1))` and
/// `r₂ = μ_{d,p}²/μ_{d,2p}` (cusp moments `μ_{d,q} = Γ(q+1)/Γ(q+d+1)`), all
/// in log-Gamma space.
/// `d = 1, p = 0` is constant and reported as degenerate.
pub fn cusp_mean_dimension(d: usize, p: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::domain("cusp_mean_dimension", 0.0, "d >= 1"));
    }
    if !(p >= 0.0) || !p.is_finite() {
        return Err(Error::domain("cusp_mean_dimension", p, "p >= 0"));
    }
    let df = d as f64;
    let r1 = 2.0 * (2.0 * p + 1.0) / ((p + 1.0) * (2.0 * p + df + 1.0));
    let log_r2 = 2.0 * log_gamma(p + 1.0)? - 2.0 * log_gamma(p + df + 1.0)? - log_gamma(2.0 * p + 1.0)?
        + log_gamma(2.0 * p + df + 1.0)?;
    // 1 − r₂ = σ²/μ_{d,2p}; keep full precision when r₂ is near 1.
    let one_minus_r2 = -log_r2.exp_m1();
    if !(one_minus_r2 > 1e-12) {
        let (_, sigma2) = crate::ridge::cusp_moments(d, p)?;
        return Err(Error::Degenerate { sigma2 });
    }
    Ok(df * (1.0 - r1) / one_minus_r2)
}

fn preint_entry(theta: &UnitVector, ell: usize) -> Result<f64> {
    let v = *theta
        .entries()
        .get(ell)
        .ok_or(Error::InvalidPreintegration { index: ell })?;
    if v == 0.0 {
        return Err(Error::InvalidPreintegration { index: ell });
    }
    Ok(v.abs().min(1.0))
}

fn preint_a1(theta_l: f64) -> f64 {
    theta_l / (2.0 - theta_l * theta_l).sqrt()
}

/// `a₂(j) = √((θ_j² + θ_ℓ²)/(2 − θ_j² − θ_ℓ²))`, written in terms of the
/// remaining mass `rest = Σ_{k∉{j,ℓ}} θ_k²` as `√((1 − rest)/(1 + rest))`.
/// This avoids forming `2 − s` from rounded squares, and gives `a₂ = 1`
/// exactly when no other coordinates carry weight.
fn preint_a2(rest: f64) -> f64 {
    let rest = rest.clamp(0.0, 1.0);
    ((1.0 - rest) / (1.0 + rest)).sqrt()
}

/// Variance of the jump preintegrated over a coordinate with weight
/// `theta_l`: `Φ(t)Φ(−t) − 2T(t, a₁)`, `a₁ = |θ_l|/√(2−θ_l²)`.
pub fn preint_variance(theta_l: f64, t: f64) -> Result<f64> {
    let a = theta_l.abs();
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain("preint_variance", theta_l, "0 < |theta_l| <= 1"));
    }
    if t == 0.0 {
        return Ok((FRAC_PI_4 - preint_a1(a).atan()) / PI);
    }
    Ok(step_variance(t) - 2.0 * Quadrature::default().owens_t(t, preint_a1(a))?)
}

/// Exact mean dimension of the jump `1{θᵀx > t}` preintegrated over
/// coordinate `ell`.
///
/// At `t = 0` this is the arctangent form
/// `Σ_{j≠ℓ}(atan a₂(j) − atan a₁)/(π/4 − atan a₁)`; otherwise
/// [`preint_mean_dimension_general`]. `|θ_ℓ| = 1` leaves a constant
/// function and returns 0 by convention.
pub fn preint_mean_dimension(theta: &UnitVector, t: f64, ell: usize) -> Result<f64> {
    let theta_l = preint_entry(theta, ell)?;
    if theta_l == 1.0 {
        return Ok(0.0);
    }
    if t != 0.0 {
        return preint_mean_dimension_general(theta, t, ell);
    }
    let atan_a1 = preint_a1(theta_l).atan();
    let num: f64 = grouped_sum(theta, ell, |rest| Ok(preint_a2(rest).atan() - atan_a1))?;
    // π/4 written as atan(1) so that a₂ = 1 terms cancel the denominator exactly.
    Ok(num / (1f64.atan() - atan_a1))
}

/// The Owen's-T form valid for every `t`:
/// `Σ_{j≠ℓ} 2[T(t,a₂(j)) − T(t,a₁)] / (Φ(t)Φ(−t) − 2T(t,a₁))`.
pub fn preint_mean_dimension_general(theta: &UnitVector, t: f64, ell: usize) -> Result<f64> {
    let theta_l = preint_entry(theta, ell)?;
    if theta_l == 1.0 {
        return Ok(0.0);
    }
    let a1 = preint_a1(theta_l);
    let hh = 0.5 * t * t;
    let quad = Quadrature::default();
    let integrand = |x: f64| {
        let q = 1.0 + x * x;
        (-hh * q).exp() / q
    };
    // T(t, a₂) − T(t, a₁) as one integral over [a₁, a₂], which keeps its
    // relative accuracy when the two limits are close (large d).
    let num = grouped_sum(theta, ell, |rest| {
        Ok(2.0 * quad.integrate(integrand, a1, preint_a2(rest))? / (2.0 * PI))
    })?;
    Ok(num / preint_variance(theta_l, t)?)
}

/// `Σ_{j≠ℓ} term(rest_j)` with `rest_j = Σ_{k∉{j,ℓ}} θ_k²`, evaluating
/// `term` once per distinct `|θ_j|`.
fn grouped_sum(theta: &UnitVector, ell: usize, term: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut others: Vec<f64> = theta
        .entries()
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != ell)
        .map(|(_, v)| v.abs())
        .collect();
    others.sort_by(f64::total_cmp);
    let mass: f64 = others.iter().map(|v| v * v).sum();
    let mut sum = 0.0;
    let mut i = 0;
    while i < others.len() {
        let v = others[i];
        let mut k = i;
        while k < others.len() && others[k] == v {
            k += 1;
        }
        sum += (k - i) as f64 * term(mass - v * v)?;
        i = k;
    }
    Ok(sum)
}

/// Upper bound for a jump preintegrated over its largest coordinate:
/// `φ(0)²/(Φ(t)Φ(−t)) · (1−‖θ‖∞²)/‖θ‖∞²`.
pub fn preint_bound_sparse(theta: &UnitVector, t: f64) -> Result<f64> {
    let m = theta.linf();
    if !(m > 0.0) {
        return Err(Error::domain("preint_bound_sparse", m, "max |theta_j| > 0"));
    }
    Ok(FRAC_1_SQRT_2PI * FRAC_1_SQRT_2PI / step_variance(t) * (1.0 - m * m).max(0.0) / (m * m))
}

/// One side of a [`BoundReport`], tagged with where it comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tagged {
    pub value: f64,
    pub source: &'static str,
}

/// Lower bound, exact value and upper bound for one integrand, any of which
/// may be missing.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub lower: Option<Tagged>,
    pub exact: Option<Tagged>,
    pub upper: Option<Tagged>,
    pub notes: Vec<String>,
}

/// Relative slack when checking `lower <= exact <= upper`.
const ORDER_TOL: f64 = 1e-12;

impl BoundReport {
    /// Builds a report, checking that the entries present are ordered.
    pub fn new(lower: Option<Tagged>, exact: Option<Tagged>, upper: Option<Tagged>) -> Result<Self> {
        let le = |a: Option<Tagged>, b: Option<Tagged>| match (a, b) {
            (Some(a), Some(b)) => a.value <= b.value + ORDER_TOL * b.value.abs().max(1.0),
            _ => true,
        };
        if !(le(lower, exact) && le(exact, upper) && le(lower, upper)) {
            return Err(Error::InconsistentBounds(format!(
                "lower {:?}, exact {:?}, upper {:?}",
                lower.map(|t| t.value),
                exact.map(|t| t.value),
                upper.map(|t| t.value)
            )));
        }
        let mut notes = Vec::new();
        for (name, e) in [("lower", lower), ("upper", upper)] {
            if let Some(e) = e {
                if e.value < 1.0 {
                    notes.push(format!("{name} bound {:.6} is below 1, the floor for any non-constant function", e.value));
                }
            }
        }
        Ok(BoundReport {
            lower,
            exact,
            upper,
            notes,
        })
    }

    /// Jump `1{θᵀx > t}`; the mean dimension is even in `t`, so bounds use `|t|`.
    pub fn jump(theta: &UnitVector, t: f64) -> Result<Self> {
        let a = t.abs();
        let lower = Some(Tagged {
            value: jump_lower_bound(theta, a)?,
            source: "jump lower bound",
        });
        let upper = if theta.dim() >= 2 {
            Some(Tagged {
                value: jump_upper_bound(theta, a)?,
                source: "jump sparsity upper bound",
            })
        } else {
            None
        };
        let exact = if t == 0.0 || theta.dim() == 1 {
            Some(Tagged {
                value: if theta.dim() == 1 { 1.0 } else { jump_exact_t0(theta) },
                source: "exact t = 0 law",
            })
        } else {
            None
        };
        Self::new(lower, exact, upper)
    }

    /// Kink `(θᵀx − t)₊`: only the Lipschitz upper bound is known.
    pub fn kink(t: f64) -> Result<Self> {
        Self::new(
            None,
            None,
            Some(Tagged {
                value: kink_upper_bound(t),
                source: "Lipschitz bound",
            }),
        )
    }

    /// Jump preintegrated over coordinate `ell`.
    pub fn preint(theta: &UnitVector, t: f64, ell: usize) -> Result<Self> {
        let exact = Some(Tagged {
            value: preint_mean_dimension(theta, t, ell)?,
            source: "preintegrated exact",
        });
        let upper = if ell == theta.argmax_abs() || theta.entries()[ell].abs() == theta.linf() {
            Some(Tagged {
                value: preint_bound_sparse(theta, t)?,
                source: "preintegrated Lipschitz bound",
            })
        } else {
            None
        };
        let mut r = Self::new(None, exact, upper)?;
        if preint_entry(theta, ell)? == 1.0 {
            r.notes.push("preintegrated function is constant; mean dimension reported as 0".into());
        }
        Ok(r)
    }

    pub fn cusp(d: usize, p: f64) -> Result<Self> {
        Self::new(
            None,
            Some(Tagged {
                value: cusp_mean_dimension(d, p)?,
                source: "cusp Gamma ratio",
            }),
            None,
        )
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, e) in [("lower", self.lower), ("exact", self.exact), ("upper", self.upper)] {
            if let Some(e) = e {
                writeln!(f, "{name} {:.6}  ({})", e.value, e.source)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn holder_examples() {
        let e = ProjectionMatrix::from(&UnitVector::normalize(vec![0.3, 0.1, -0.7]).unwrap());
        assert!(close(holder_bound(2.0, 1.0, &e, 0.5).unwrap(), 8.0, 1e-12));
        let (_, s2) = kink_moments(0.0);
        let kink = holder_bound(1.0, 1.0, &e, s2).unwrap();
        assert!(close(kink, 2.0 * PI / (PI - 1.0), 1e-12));
        assert!(close(kink, 2.933, 1e-3));
        let half = ProjectionMatrix::from(&UnitVector::equal(4).unwrap());
        let v = holder_bound(1.0, 0.5, &half, 1.0).unwrap();
        // 2^{-1/2} · √(2/π) · 2 = 2/√π
        assert!(close(v, std::f64::consts::FRAC_2_SQRT_PI, 1e-12));
        assert!(close(holder_bound_least_sparse(1.0, 0.5, 4, 1.0).unwrap(), v, 1e-14));
        assert!(close(holder_bound_least_sparse(1.0, 0.5, 100, 1.0).unwrap(), 5.641_895_835, 1e-8));
        assert!(close(holder_bound_least_sparse(1.3, 1.0, 77, 0.2).unwrap(), 1.3 * 1.3 / 0.2, 1e-13));
        assert!(holder_bound(1.0, 1.5, &half, 1.0).is_err());
        assert!(holder_bound(1.0, 0.0, &half, 1.0).is_err());
    }

    #[test]
    fn spatial_holder_examples() {
        let th = ProjectionMatrix::from(&UnitVector::equal(5).unwrap());
        let a = spatial_holder_bound(2.25, f64::INFINITY, 0.7, &th, 0.3).unwrap();
        let b = holder_bound(1.5, 0.7, &th, 0.3).unwrap();
        assert!(close(a, b, 1e-12));
        let v = spatial_holder_bound(4.0, 2.0, 1.0, &th, 0.5).unwrap();
        assert!(close(v, 4.0 * 3f64.sqrt() / 0.5, 1e-12));
        assert!(spatial_holder_bound(1.0, 1.0, 1.0, &th, 1.0).is_err());
        for p in [1.5, 2.0, 4.0, 10.0] {
            for alpha in [0.25, 0.5, 1.0] {
                let s = spatial_holder_bound(1.0, p, alpha, &th, 1.0).unwrap();
                let h = holder_bound(1.0, alpha, &th, 1.0).unwrap();
                assert!(s >= h * (1.0 - 1e-12), "p = {p}, alpha = {alpha}");
            }
        }
    }

    #[test]
    fn jump_bound_examples() {
        let th = UnitVector::equal(4).unwrap();
        assert!(close(jump_upper_bound(&th, 0.0).unwrap(), 9.827, 1e-3));
        assert!(close(jump_lower_bound(&th, 0.0).unwrap(), 0.3312, 5e-5));
        assert!(close(jump_exact_t0(&th), (0.75f64).acos() * 8.0 / PI, 1e-14));
        assert!(close(jump_exact_t0(&UnitVector::equal(2).unwrap()), 4.0 / 3.0, 1e-14));
        let e1 = UnitVector::basis(2, 0).unwrap();
        assert!(close(jump_upper_bound(&e1, 0.0).unwrap(), 4.914, 5e-4));
        assert!(jump_upper_bound(&UnitVector::equal(1).unwrap(), 0.0).is_err());
        let lo = jump_lower_bound(&th, 2.0).unwrap();
        assert!(lo > 0.0 && lo < jump_upper_bound(&th, 2.0).unwrap());
        assert!(close(jump_exact_t0(&UnitVector::equal(1).unwrap()), 1.0, 2.0 * f64::EPSILON));
        for d in 2..=64 {
            let th = UnitVector::equal(d).unwrap();
            let exact = jump_exact_t0(&th);
            assert!(exact <= jump_upper_bound(&th, 0.0).unwrap());
            assert!(exact >= 2.0 / PI * th.l1() - 1e-12);
        }
    }

    #[test]
    fn bivariate_examples() {
        assert_eq!(bivariate_lower_bound(1.0, 0.3).unwrap(), 0.0);
        assert!(close(bivariate_lower_bound(0.0, 0.0).unwrap(), (-1f64).exp() / (2.0 * PI), 1e-16));
        assert!(bivariate_lower_bound(-0.1, 0.0).is_err());
        assert!(bivariate_lower_bound(0.5, -1.0).is_err());
    }

    #[test]
    fn cusp_examples() {
        assert!(close(cusp_mean_dimension(2, 0.0).unwrap(), 4.0 / 3.0, 1e-13));
        assert!(close(cusp_mean_dimension(3, 1.0).unwrap(), 3.0 * 0.5 / (1.0 - 5.0 / 48.0), 1e-13));
        assert!(matches!(cusp_mean_dimension(1, 0.0), Err(Error::Degenerate { .. })));
        assert!(close(cusp_mean_dimension(1, 2.0).unwrap(), 1.0, 1e-13));
        // p = 0 simplification: d (1 − 2/(d+1)) / (1 − 1/d!)
        let mut fact = 1.0;
        for d in 1..=12usize {
            fact *= d as f64;
            if d >= 2 {
                let expect = d as f64 * (1.0 - 2.0 / (d as f64 + 1.0)) / (1.0 - 1.0 / fact);
                assert!(close(cusp_mean_dimension(d, 0.0).unwrap(), expect, 1e-12), "d = {d}");
            }
        }
        // At fixed p, d − ν approaches (4p+2)/(p+1) as d grows.
        for p in [0.0, 1.0, 2.0, 5.0] {
            let gap = |d: usize| {
                (d as f64 - cusp_mean_dimension(d, p).unwrap() - (4.0 * p + 2.0) / (p + 1.0)).abs()
            };
            assert!(gap(1000) < gap(100) && gap(100) < gap(30), "p = {p}");
        }
        assert!((1000.0 - cusp_mean_dimension(1000, 1.0).unwrap() - 3.0).abs() < 0.01);
        assert!(cusp_mean_dimension(5000, 3.0).unwrap().is_finite());
    }

    #[test]
    fn preint_examples() {
        let th = UnitVector::equal(2).unwrap();
        assert_eq!(preint_mean_dimension(&th, 0.0, 1).unwrap(), 1.0);
        assert_eq!(preint_mean_dimension(&th, 0.0, 0).unwrap(), 1.0);
        assert!(close(preint_mean_dimension_general(&th, 0.0, 1).unwrap(), 1.0, 1e-10));
        let e = UnitVector::basis(3, 2).unwrap();
        assert_eq!(preint_mean_dimension(&e, 0.4, 2).unwrap(), 0.0);
        assert!(matches!(
            preint_mean_dimension(&e, 0.4, 0),
            Err(Error::InvalidPreintegration { index: 0 })
        ));
        let eq = UnitVector::equal(16).unwrap();
        assert!(close(preint_bound_sparse(&eq, 0.0).unwrap(), 15.0 / (2.0 * PI * 0.25), 1e-12));
        assert!(close(
            preint_bound_sparse(&UnitVector::one_big(9, 0.5).unwrap(), 0.0).unwrap(),
            1.9099,
            5e-5
        ));
        assert_eq!(preint_bound_sparse(&UnitVector::basis(4, 1).unwrap(), 1.0).unwrap(), 0.0);
    }

    #[test]
    fn preint_two_paths_agree_at_zero() {
        for theta in [
            UnitVector::equal(7).unwrap(),
            UnitVector::one_big(50, 0.5).unwrap(),
            UnitVector::normalize(vec![0.1, -0.4, 0.3, 0.8, 0.2]).unwrap(),
        ] {
            for ell in [0, 3] {
                let a = preint_mean_dimension(&theta, 0.0, ell).unwrap();
                let b = preint_mean_dimension_general(&theta, 0.0, ell).unwrap();
                assert!(close(a, b, 1e-10), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn reports_check_ordering() {
        let r = BoundReport::jump(&UnitVector::equal(4).unwrap(), 0.0).unwrap();
        assert!(close(r.lower.unwrap().value, 0.3312, 5e-5));
        assert!(close(r.exact.unwrap().value, 1.8404276493009273, 1e-14));
        assert!(close(r.upper.unwrap().value, 9.827, 1e-3));
        assert!(r.notes.iter().any(|n| n.contains("lower")));
        let bad = BoundReport::new(
            Some(Tagged { value: 2.0, source: "x" }),
            Some(Tagged { value: 1.0, source: "y" }),
            None,
        );
        assert!(matches!(bad, Err(Error::InconsistentBounds(_))));
        let text = BoundReport::cusp(2, 0.0).unwrap().to_string();
        assert!(text.starts_with("exact 1.333333"), "{text}");
    }
}
