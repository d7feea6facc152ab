use super::dirnums::{direction_integers, DirectionNumbers};
use super::scramble::ScrambleState;
use crate::error::{Error, Result};

/// Largest number of points a 32-digit generator can emit.
pub const MAX_POINTS: u64 = 1 << 32;

const TWO_POW_NEG_32: f64 = 1.0 / 4_294_967_296.0;

/// A Sobol' sequence generator with 32-digit precision.
///
/// Points are emitted in Gray-code order: point `i` is the XOR of the
/// direction integers selected by the bits of `i ^ (i >> 1)`. For any full
/// block of `2^m` points this is the same set as the natural ordering.
#[derive(Debug, Clone)]
pub struct SobolGenerator {
    directions: Vec<[u32; 32]>,
    scramble: Option<ScrambleState>,
}

impl SobolGenerator {
    pub fn new(numbers: &DirectionNumbers, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Capacity("Sobol' dimension must be at least 1".into()));
        }
        if dim > numbers.max_dim() {
            return Err(Error::Capacity(format!(
                "dimension {dim} exceeds the {} available direction-number dimensions",
                numbers.max_dim()
            )));
        }
        let directions = (1..=dim).map(|j| direction_integers(numbers, j)).collect();
        Ok(SobolGenerator {
            directions,
            scramble: None,
        })
    }

    /// Same generator, but emitting nested-uniform-scrambled points.
    pub fn scrambled(mut self, seed: u64) -> Self {
        self.scramble = Some(ScrambleState::new(seed, self.dim()));
        self
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn is_scrambled(&self) -> bool {
        self.scramble.is_some()
    }

    /// Digits of point `index` (unscrambled digits go through the scramble if set).
    pub fn point_bits(&self, index: u32, out: &mut [u32]) {
        let gray = index ^ (index >> 1);
        for (j, (slot, v)) in out.iter_mut().zip(&self.directions).enumerate() {
            let mut x = 0u32;
            let mut g = gray;
            while g != 0 {
                let k = g.trailing_zeros() as usize;
                x ^= v[k];
                g &= g - 1;
            }
            *slot = match &self.scramble {
                Some(s) => s.apply(j, x),
                None => x,
            };
        }
    }

    /// Visits the first `n` points in order as uniforms in [0,1).
    pub fn for_each_point(&self, n: u64, mut f: impl FnMut(u64, &[f64])) -> Result<()> {
        check_count(n)?;
        let dim = self.dim();
        let mut state = vec![0u32; dim];
        let mut point = vec![0.0; dim];
        for i in 0..n {
            if i > 0 {
                let k = (i as u32).trailing_zeros() as usize;
                for (s, v) in state.iter_mut().zip(&self.directions) {
                    *s ^= v[k];
                }
            }
            match &self.scramble {
                Some(sc) => {
                    for (j, (p, &s)) in point.iter_mut().zip(&state).enumerate() {
                        *p = sc.apply(j, s) as f64 * TWO_POW_NEG_32;
                    }
                }
                None => {
                    for (p, &s) in point.iter_mut().zip(&state) {
                        *p = s as f64 * TWO_POW_NEG_32;
                    }
                }
            }
            f(i, &point);
        }
        Ok(())
    }
}

pub(crate) fn check_count(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Capacity("at least one point is required".into()));
    }
    if n > MAX_POINTS {
        return Err(Error::Capacity(format!(
            "{n} points requested, a 32-digit Sobol' sequence has only 2^32"
        )));
    }
    Ok(())
}
