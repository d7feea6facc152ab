//! Scalar special functions: the standard Gaussian density, distribution and
//! quantile functions, Owen's T function, fractional absolute Gaussian
//! moments and the log-Gamma function.
//!
//! Everything here is a pure function of its arguments. Integrals that have
//! no convenient closed form (Owen's T) go through [`Quadrature`], an
//! adaptive 15-point Gauss-Kronrod rule whose tolerance and subdivision
//! budget can be overridden per call site.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// 1/sqrt(2*pi)
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard Gaussian density.
#[inline]
pub fn norm_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard Gaussian distribution function.
///
/// Evaluated through the complementary error function, which keeps full
/// relative precision in the lower tail (`norm_cdf(-8)` is about `6.2e-16`,
/// not `0`). Underflows to zero only below about `-38.5`.
#[inline]
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `norm_cdf(x) * norm_cdf(-x)`, the variance of a Gaussian step function.
#[inline]
pub fn step_variance(t: f64) -> f64 {
    // One tail evaluation serves both factors.
    let lower = norm_cdf(-t.abs());
    lower * (1.0 - lower)
}

/// Standard Gaussian quantile function.
///
/// Piecewise minimax rational approximations (one central branch in
/// `p - 1/2`, five tail branches in `sqrt(-ln p)`), each accurate to about
/// `1e-16`. A Newton or Halley step on [`norm_cdf`] does not improve on that
/// in double precision and doubles the cost, so none is taken. The upper
/// tail is mapped onto the lower one through `1 - p`, which is exact there.
pub fn norm_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("norm_quantile", p, "0 < p < 1"));
    }
    Ok(quantile_unchecked(p))
}

/// [`norm_quantile`] without the domain check. Callers guarantee `0 < p < 1`.
#[inline]
pub(crate) fn quantile_unchecked(p: f64) -> f64 {
    let u = p - 0.5;
    if u.abs() < U_MAX {
        quantile_central(u)
    } else if u > 0.0 {
        -quantile_lower_tail(1.0 - p)
    } else {
        quantile_lower_tail(p)
    }
}

const U_MAX: f64 = 0.341_344_746_068_542_9; // Phi(1) - 1/2

/// Inverse of `Phi(x) - 1/2` for `|u| < U_MAX`.
#[allow(clippy::excessive_precision)]
fn quantile_central(u: f64) -> f64 {
    let s = U_MAX * U_MAX - u * u;
    u * ((2.929_589_546_983_088_05
        + s * (5.026_057_216_730_310_3e1
            + s * (3.018_705_419_229_339_37e2
                + s * (7.499_778_145_665_792_4e2
                    + s * (6.904_892_420_614_086_12e2
                        + s * (1.342_332_435_026_538_64e2 - 7.589_398_814_012_592_42 * s))))))
        / (1.0
            + s * (1.891_853_807_457_459_8e1
                + s * (1.294_041_204_487_552_81e2
                    + s * (3.868_212_085_404_174_53e2
                        + s * (4.791_239_145_097_567_57e2 + 1.792_270_085_081_026_28e2 * s))))))
}

/// `Phi^{-1}(p)` for `p <= Phi(-1)`, i.e. results `<= -1`.
#[allow(clippy::excessive_precision)]
fn quantile_lower_tail(p: f64) -> f64 {
    let r = (-p.ln()).sqrt();
    if r < 2.05 {
        (3.691_562_302_945_566_191
            + r * (4.717_059_060_074_068_944_9e1
                + r * (6.545_129_211_026_145_460_9e1
                    + r * (-7.459_468_772_604_592_682_1e1
                        + r * (-8.338_389_400_363_696_972_2e1 - 1.305_407_234_049_409_370_4e1 * r)))))
            / (1.0
                + r * (2.083_721_132_869_775_372_6e1
                    + r * (7.181_381_218_257_925_545_9e1
                        + r * (5.927_012_255_604_607_771_7e1
                            + r * (9.221_688_797_873_743_230_3 + 1.829_517_485_205_353_057_9e-4 * r)))))
    } else if r < 3.41 {
        (3.234_017_911_631_797_028_8
            + r * (1.449_177_828_689_122_096e1
                + r * (6.839_737_025_659_153_287_8e-1
                    + r * (-1.812_544_277_917_891_83e1
                        + r * (-1.005_916_339_568_646_151e1 - 1.201_314_787_943_552_557_4 * r)))))
            / (1.0
                + r * (8.882_093_177_330_433_752_5
                    + r * (1.465_637_066_517_679_971_2e1
                        + r * (7.136_981_105_610_976_874_5
                            + r * (8.488_489_219_914_925_546_9e-1
                                + 1.095_757_609_882_959_532_3e-5 * r)))))
    } else if r < 6.7 {
        (3.125_223_578_008_758_480_7
            + r * (9.948_372_431_703_656_067_6
                + r * (-5.163_392_911_552_553_462_8
                    + r * (-1.107_053_468_930_936_806_1e1
                        + r * (-2.869_906_133_588_252_674_4 - 1.541_431_949_401_359_749_2e-1 * r)))))
            / (1.0
                + r * (7.076_769_154_309_171_622
                    + r * (8.108_634_112_236_153_240_7
                        + r * (2.030_707_606_430_904_361_3
                            + r * (1.089_797_223_413_182_890_1e-1 + 1.356_598_356_444_129_763_4e-7 * r)))))
    } else if r < 12.9 {
        (2.616_126_495_089_728_368_1
            + r * (2.250_881_388_987_032_271
                + r * (-3.688_196_041_019_692_267
                    + r * (-2.964_425_135_315_060_566_3
                        + r * (-4.759_516_954_678_321_643_6e-1 - 1.612_303_318_390_145_052e-2 * r)))))
            / (1.0
                + r * (3.251_745_516_903_592_149_5
                    + r * (2.128_203_027_215_318_819_4
                        + r * (3.366_374_640_562_640_016_4e-1
                            + r * (1.140_008_728_217_759_435_9e-2 + 3.084_809_357_096_678_729_1e-9 * r)))))
    } else {
        (2.322_684_904_787_230_295_5
            + r * (-4.279_965_073_450_209_429_7e-2
                + r * (-2.589_445_156_846_572_843_2
                    + r * (-8.638_518_121_921_375_884_7e-1
                        + r * (-6.512_759_375_378_167_240_4e-2 - 1.056_635_772_720_258_540_2e-3 * r)))))
            / (1.0
                + r * (1.936_131_611_925_441_220_6
                    + r * (6.132_084_132_919_749_334_1e-1
                        + r * (4.605_497_451_247_444_318_9e-2
                            + r * (7.471_447_992_167_225_483e-4 + 2.313_534_320_630_488_781_8e-11 * r)))))
    }
}

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", x, "x > 0"));
    }
    Ok(libm::lgamma_r(x).0)
}

/// Fractional absolute moment `E|Y|^eta` of `Y ~ N(0,1)`:
/// `2^(eta/2) Gamma((eta+1)/2) / sqrt(pi)`.
pub fn abs_moment(eta: f64) -> Result<f64> {
    if !(eta > -1.0) || !eta.is_finite() {
        return Err(Error::domain("abs_moment", eta, "eta > -1"));
    }
    let lg = log_gamma(0.5 * (eta + 1.0))?;
    Ok((0.5 * eta * std::f64::consts::LN_2 + lg).exp() / PI.sqrt())
}

/// `M_η = E|Y|^η`, the moment in the spatial Hölder bound; same as
/// [`abs_moment`].
pub fn m_eta(eta: f64) -> Result<f64> {
    abs_moment(eta)
}

/// Owen's T function `T(h, a) = phi(h) * int_0^a phi(h x) / (1 + x^2) dx`,
/// by adaptive quadrature with default tolerances.
pub fn owens_t(h: f64, a: f64) -> Result<f64> {
    Quadrature::default().owens_t(h, a)
}

/// Closed forms of `int Phi(a + b x) phi(x) dx` and
/// `int Phi(a + b x)^2 phi(x) dx` over the real line.
pub fn gauss_cdf_integrals(a: f64, b: f64) -> Result<(f64, f64)> {
    let h = a / (1.0 + b * b).sqrt();
    let first = norm_cdf(h);
    let second = first - 2.0 * owens_t(h, 1.0 / (1.0 + 2.0 * b * b).sqrt())?;
    Ok((first, second))
}

/// Adaptive Gauss-Kronrod (7/15) quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-12,
            max_subdivisions: 64,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Quadrature {
    pub fn new(abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::domain("Quadrature::abs_tol", abs_tol, "abs_tol > 0"));
        }
        if max_subdivisions == 0 {
            return Err(Error::domain(
                "Quadrature::max_subdivisions",
                0.0,
                "max_subdivisions >= 1",
            ));
        }
        Ok(Quadrature {
            abs_tol,
            max_subdivisions,
        })
    }

    /// Integrates `f` over `[a, b]` (either orientation).
    ///
    /// Globally adaptive: the segment with the largest error estimate is
    /// bisected until the summed estimate drops below `abs_tol`. Fails with
    /// [`Error::Quadrature`] if `max_subdivisions` bisections do not suffice.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        if b < a {
            return self.integrate(f, b, a).map(|v| -v);
        }
        let mut segments = vec![gauss_kronrod_15(&f, a, b)];
        let mut splits = 0;
        loop {
            let (total, error) = segments
                .iter()
                .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
            if error <= self.abs_tol {
                return Ok(total);
            }
            if splits >= self.max_subdivisions {
                return Err(Error::Quadrature {
                    achieved: error,
                    requested: self.abs_tol,
                });
            }
            let worst = segments
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
                .map(|(i, _)| i)
                .unwrap();
            let seg = segments.swap_remove(worst);
            let mid = 0.5 * (seg.a + seg.b);
            if mid <= seg.a || mid >= seg.b {
                // Interval cannot be split further in floating point.
                return Err(Error::Quadrature {
                    achieved: error,
                    requested: self.abs_tol,
                });
            }
            segments.push(gauss_kronrod_15(&f, seg.a, mid));
            segments.push(gauss_kronrod_15(&f, mid, seg.b));
            splits += 1;
        }
    }

    /// `int f(x) phi(x) dx` over the real line, split at `breaks` (kinks,
    /// jumps, singularities of `f`) and at zero. The tails beyond `|x| = 13`
    /// carry Gaussian mass below `1e-38` and are dropped.
    pub fn integrate_gaussian<F: Fn(f64) -> f64>(&self, f: F, breaks: &[f64]) -> Result<f64> {
        const EDGE: f64 = 13.0;
        let mut points = vec![-EDGE, -4.0, 0.0, 4.0, EDGE];
        points.extend(breaks.iter().copied().filter(|b| b.abs() < EDGE));
        points.sort_by(f64::total_cmp);
        points.dedup();
        let weighted = |x: f64| f(x) * norm_pdf(x);
        let pieces = (points.len() - 1) as f64;
        let per_piece = Quadrature {
            abs_tol: self.abs_tol / pieces,
            ..*self
        };
        points
            .windows(2)
            .map(|w| per_piece.integrate(weighted, w[0], w[1]))
            .sum()
    }

    /// Owen's T function with this quadrature's tolerances.
    pub fn owens_t(&self, h: f64, a: f64) -> Result<f64> {
        if !h.is_finite() || !a.is_finite() {
            return Err(Error::domain("owens_t", if h.is_finite() { a } else { h }, "finite"));
        }
        if a == 0.0 {
            return Ok(0.0);
        }
        if a < 0.0 {
            return self.owens_t(h, -a).map(|v| -v);
        }
        let h = h.abs();
        if a > 1.0 {
            // Reciprocal identity keeps the quadrature range inside [0, 1],
            // where a 15-point rule cannot step over the integrand's bulk.
            let ah = a * h;
            let rest = self.owens_t(ah, 1.0 / a)?;
            return Ok(0.5 * (norm_cdf(h) * norm_cdf(-ah) + norm_cdf(ah) * norm_cdf(-h)) - rest);
        }
        let hh = 0.5 * h * h;
        let integrand = |x: f64| {
            let q = 1.0 + x * x;
            (-hh * q).exp() / q
        };
        Ok(self.integrate(integrand, 0.0, a)? / (2.0 * PI))
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (k, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += wk * pair;
        // Odd Kronrod nodes coincide with the 7-point Gauss nodes.
        if k % 2 == 1 {
            gauss += WG[k / 2] * pair;
        }
    }
    let value = kronrod * half;
    // Plain |K - G| is pessimistic for smooth integrands but never optimistic.
    let error = ((kronrod - gauss) * half).abs().max(50.0 * f64::EPSILON * value.abs());
    Segment { a, b, value, error }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_values() {
        assert_eq!(norm_pdf(0.0), 0.398_942_280_401_432_7);
        assert!((norm_pdf(1.0) - 0.241_970_724_519_143_37).abs() < 1e-17);
        assert_eq!(norm_pdf(-2.5), norm_pdf(2.5));
    }

    #[test]
    fn cdf_values_and_tail() {
        assert_eq!(norm_cdf(0.0), 0.5);
        assert!((norm_cdf(1.96) - 0.975_002_104_851_779_5).abs() < 1e-15);
        let tail = norm_cdf(-8.0);
        assert!(tail > 0.0);
        assert!((tail / 6.220_960_574_271_784e-16 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn step_variance_matches_product() {
        for i in -80..=80 {
            let x = i as f64 / 10.0;
            let direct = norm_cdf(x) * norm_cdf(-x);
            assert!((step_variance(x) - direct).abs() <= 4.0 * f64::EPSILON * direct, "{x}");
        }
        assert_eq!(step_variance(0.0), 0.25);
    }

    #[test]
    fn cdf_reflection() {
        for i in 0..=800 {
            let x = -8.0 + 0.02 * i as f64;
            let sum = norm_cdf(-x) + norm_cdf(x);
            assert!((sum - 1.0).abs() <= 2.0 * f64::EPSILON, "x = {x}");
        }
    }

    #[test]
    fn quantile_values() {
        assert_eq!(norm_quantile(0.5).unwrap(), 0.0);
        assert!((norm_quantile(0.975).unwrap() - 1.959_963_984_540_054_5).abs() < 1e-14);
        assert!(norm_quantile(0.0).is_err());
        assert!(norm_quantile(1.0).is_err());
        assert!(norm_quantile(f64::NAN).is_err());
    }

    #[test]
    fn quantile_inverts_cdf_down_to_tiny_probabilities() {
        let mut p = 1e-300_f64;
        while p < 0.5 {
            let x = norm_quantile(p).unwrap();
            assert!((norm_cdf(x) - p).abs() <= 1e-12, "p = {p}");
            // d log Phi / dx is about |x| in the tail, so one ulp of x costs
            // a relative error of order x^2 * eps in Phi(x).
            assert!(((norm_cdf(x) - p) / p).abs() < 1e-15 * x.abs().max(1.0).powi(2), "p = {p}");
            p *= 3.7;
        }
        let mut q = 1e-12_f64;
        while q < 0.5 {
            let p = 1.0 - q;
            let x = norm_quantile(p).unwrap();
            assert!((norm_cdf(x) - p).abs() <= 1e-12, "p = {p}");
            q *= 5.3;
        }
    }

    #[test]
    fn owens_t_special_values() {
        assert_eq!(owens_t(1.3, 0.0).unwrap(), 0.0);
        assert!((owens_t(0.0, 1.0).unwrap() - 0.125).abs() < 1e-14);
        assert_eq!(owens_t(0.7, 0.4).unwrap(), owens_t(-0.7, 0.4).unwrap());
        assert!(owens_t(0.7, -0.4).unwrap() < 0.0);
        assert!(owens_t(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn owens_t_at_infinity_limit() {
        // T(h, a) -> Phi(-|h|)/2 as a -> infinity.
        let h = 0.8;
        let big = owens_t(h, 1e4).unwrap();
        assert!((big - 0.5 * norm_cdf(-h)).abs() < 1e-10);
        assert!((owens_t(-h, -1e4).unwrap() + 0.5 * norm_cdf(-h)).abs() < 1e-10);
    }

    #[test]
    fn quadrature_reports_non_convergence() {
        let q = Quadrature::new(1e-14, 2).unwrap();
        let err = q.integrate(|x: f64| if x > 0.123 { 1.0 } else { 0.0 }, 0.0, 1.0);
        assert!(matches!(err, Err(Error::Quadrature { .. })));
        assert!(Quadrature::new(0.0, 10).is_err());
        assert!(Quadrature::new(1e-10, 0).is_err());
    }

    #[test]
    fn gauss_cdf_integral_degenerate_slopes() {
        let (m1, m2) = gauss_cdf_integrals(0.0, 0.0).unwrap();
        assert!((m1 - 0.5).abs() < 1e-15 && (m2 - 0.25).abs() < 1e-13);
        let (m1, m2) = gauss_cdf_integrals(1.0, 0.0).unwrap();
        let p = norm_cdf(1.0);
        assert!((m1 - p).abs() < 1e-15 && (m2 - p * p).abs() < 1e-12);
    }

    #[test]
    fn moments_and_gamma() {
        assert!((abs_moment(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((abs_moment(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((abs_moment(1.0).unwrap() - 0.797_884_560_802_865_4).abs() < 1e-15);
        assert!((abs_moment(4.0).unwrap() - 3.0).abs() < 1e-14);
        assert!(abs_moment(-1.0).is_err());

        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!(log_gamma(0.0).is_err());
        assert!(log_gamma(-3.5).is_err());
    }
}
