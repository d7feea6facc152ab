//! Nested uniform (Owen) scrambling of 32-bit digit expansions.
//!
//! Every node of the binary digit tree, identified by the leading bits seen
//! so far, owns one random bit that flips the next digit. The bits come from
//! hashing node ids with a per-dimension key, so no tables are stored and a
//! point's scrambled value depends only on (seed, dimension, unscrambled
//! digits).

/// SplitMix64 finalizer. Bijective on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream seed `i` derived from a base seed. Used for per-dimension keys and
/// per-replicate seeds.
///
/// The XOR goes through the mixer: with a bare `seed ^ h(i)`, nesting
/// (replicate `r`, then dimension `j`) is symmetric in `r` and `j`, and
/// replicates become coordinate permutations of one another.
#[inline]
pub fn derive_seed(seed: u64, i: u64) -> u64 {
    mix64(seed ^ mix64(i.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScrambleState {
    seed: u64,
    keys: Vec<u64>,
}

impl ScrambleState {
    pub fn new(seed: u64, dim: usize) -> Self {
        let keys = (0..dim as u64).map(|j| mix64(derive_seed(seed, j))).collect();
        ScrambleState { seed, keys }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Scrambles the digits of coordinate `j`.
    #[inline]
    pub fn apply(&self, j: usize, x: u32) -> u32 {
        nested(x, self.keys[j])
    }
}

/// Levels of the digit tree served by one hash: a subtree of depth 6 has
/// 63 nodes, one per bit of a 64-bit hash (bit 0 unused).
const LEVELS_PER_HASH: u32 = 6;

#[inline]
fn nested(x: u32, key: u64) -> u32 {
    let mut flips = 0u32;
    let mut depth = 0u32;
    while depth < 32 {
        // Subtree root id: (1 << depth) | leading `depth` digits. Ids are
        // unique over the whole tree, so every subtree draws its own hash.
        let prefix = if depth == 0 { 0 } else { (x >> (32 - depth)) as u64 };
        let bits = mix64(((1u64 << depth) | prefix) ^ key);
        // The next six digits; a node `r` levels into the subtree has heap
        // index (1 << r) | (first r of them), in 1..=63.
        let chunk = ((x << depth) >> 26) as u64;
        for r in 0..LEVELS_PER_HASH.min(32 - depth) {
            let local = (1u64 << r) | (chunk >> (LEVELS_PER_HASH - r));
            flips |= (((bits >> local) & 1) as u32) << (31 - depth - r);
        }
        depth += LEVELS_PER_HASH;
    }
    x ^ flips
}
