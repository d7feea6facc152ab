use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Plain Monte Carlo uniforms from a seeded ChaCha8 stream.
#[derive(Debug, Clone)]
pub struct PrngSampler {
    seed: u64,
    dim: usize,
}

impl PrngSampler {
    pub fn new(seed: u64, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Capacity("sampler dimension must be at least 1".into()));
        }
        Ok(PrngSampler { seed, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn for_each_point(&self, n: u64, mut f: impl FnMut(u64, &[f64])) -> Result<()> {
        if n == 0 {
            return Err(Error::Capacity("at least one point is required".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut point = vec![0.0; self.dim];
        for i in 0..n {
            for p in point.iter_mut() {
                *p = rng.gen::<f64>();
            }
            f(i, &point);
        }
        Ok(())
    }
}
