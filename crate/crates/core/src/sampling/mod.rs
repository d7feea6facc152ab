//! Plain Monte Carlo and scrambled Sobol' points, and their Gaussian images.

mod dirnums;
mod prng;
mod scramble;
mod sobol;

pub use dirnums::{DirectionNumbers, DirectionRecord, DIRNUMS_ENV};
pub use prng::PrngSampler;
pub use scramble::{derive_seed, mix64, ScrambleState};
pub use sobol::{SobolGenerator, MAX_POINTS};

use crate::error::Result;
use crate::special::quantile_unchecked;

/// Replacement for coordinates that land exactly on 0 (and mirrored for 1).
pub const EDGE_NUDGE: f64 = 1.0 / 8_589_934_592.0;

/// Maps a uniform to a standard normal, nudging exact 0 and 1 inward.
#[inline]
pub fn gaussian_of(u: f64) -> f64 {
    let u = if u <= 0.0 {
        EDGE_NUDGE
    } else if u >= 1.0 {
        1.0 - EDGE_NUDGE
    } else {
        u
    };
    quantile_unchecked(u)
}

/// `n` points in `dim` dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBlock {
    n: usize,
    dim: usize,
    points: Vec<f64>,
    gaussian: Option<Vec<f64>>,
}

impl SampleBlock {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    pub fn gaussian(&self, i: usize) -> Option<&[f64]> {
        self.gaussian
            .as_ref()
            .map(|g| &g[i * self.dim..(i + 1) * self.dim])
    }

    /// Column `j` of the uniform points.
    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().skip(j).step_by(self.dim).copied()
    }

    pub fn gaussian_column(&self, j: usize) -> Option<impl Iterator<Item = f64> + '_> {
        self.gaussian
            .as_ref()
            .map(move |g| g.iter().skip(j).step_by(self.dim).copied())
    }
}

/// Where the points come from. Both variants are immutable and reproducible.
#[derive(Debug, Clone)]
pub enum Sampler {
    Sobol(SobolGenerator),
    Prng(PrngSampler),
}

impl Sampler {
    pub fn dim(&self) -> usize {
        match self {
            Sampler::Sobol(g) => g.dim(),
            Sampler::Prng(p) => p.dim(),
        }
    }

    pub fn for_each_point(&self, n: u64, f: impl FnMut(u64, &[f64])) -> Result<()> {
        match self {
            Sampler::Sobol(g) => g.for_each_point(n, f),
            Sampler::Prng(p) => p.for_each_point(n, f),
        }
    }

    /// Visits the Gaussian images of the first `n` points.
    pub fn for_each_gaussian(&self, n: u64, mut f: impl FnMut(u64, &[f64])) -> Result<()> {
        let mut z = vec![0.0; self.dim()];
        self.for_each_point(n, |i, u| {
            for (zj, &uj) in z.iter_mut().zip(u) {
                *zj = gaussian_of(uj);
            }
            f(i, &z);
        })
    }

    pub fn block(&self, n: usize) -> Result<SampleBlock> {
        let dim = self.dim();
        let mut points = Vec::with_capacity(n * dim);
        self.for_each_point(n as u64, |_, p| points.extend_from_slice(p))?;
        Ok(SampleBlock {
            n,
            dim,
            points,
            gaussian: None,
        })
    }
}

pub fn load_direction_numbers<R: std::io::BufRead>(source: R) -> Result<DirectionNumbers> {
    DirectionNumbers::load(source)
}

/// The first `n` points of `gen` (Gray-code order).
pub fn sobol_points(gen: &SobolGenerator, n: usize) -> Result<SampleBlock> {
    Sampler::Sobol(gen.clone()).block(n)
}

pub fn scramble(gen: SobolGenerator, seed: u64) -> SobolGenerator {
    gen.scrambled(seed)
}

/// Fills in the Gaussian images of a block's points.
pub fn to_gaussian(mut block: SampleBlock) -> SampleBlock {
    block.gaussian = Some(block.points.iter().map(|&u| gaussian_of(u)).collect());
    block
}

pub fn prng_points(seed: u64, n: usize, dim: usize) -> Result<SampleBlock> {
    Sampler::Prng(PrngSampler::new(seed, dim)?).block(n)
}
