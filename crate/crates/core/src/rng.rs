//! Seeded random number generation with a fixed, documented algorithm.
//!
//! Every stochastic quantity in this crate is drawn from [`SplitMix64`]
//! (Steele, Lea & Flood 2014): a 64-bit counter advanced by the golden-ratio
//! increment and passed through a two-round xor-multiply finalizer. The
//! generator and all of its transforms are spelled out here so that another
//! implementation can reproduce the exact streams:
//!
//! * uniform doubles take the top 53 bits, offset by half an ulp so the
//!   result lies strictly inside (0, 1);
//! * standard normals use the Marsaglia polar method (no ziggurat tables),
//!   consuming uniform pairs until one lands in the unit disc and caching
//!   the second variate of each accepted pair;
//! * exponentials use inverse-CDF sampling;
//! * shape-2 gamma variates are the sum of two exponentials (Erlang-2),
//!   which avoids an accept/reject loop entirely;
//! * subsets are drawn by a partial Fisher-Yates shuffle.

/// SplitMix64 generator. Copy-cheap; the whole state is one `u64`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
    /// Second variate of the last accepted polar-method pair.
    spare_normal: Option<f64>,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer (also used standalone for seed derivation).
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for sub-stream `index` of `master` deterministically.
///
/// Distinct indexes map to distinct inputs of the (bijective) finalizer, so
/// sub-stream seeds never collide for a fixed master seed.
pub fn split(master: u64, index: u64) -> u64 {
    mix(master ^ mix(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_normal: None,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform draw from the open interval (0, 1).
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)`. The modulo bias is below
    /// `bound / 2^64`, far beneath anything observable here.
    #[inline]
    pub fn next_below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        (self.next_u64() % bound as u64) as usize
    }

    /// Standard normal draw via the Marsaglia polar method.
    pub fn next_standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.next_open01() - 1.0;
            let v = 2.0 * self.next_open01() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let scale = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * scale);
                return u * scale;
            }
        }
    }

    /// Exponential draw with the given mean (inverse CDF).
    #[inline]
    pub fn next_exponential(&mut self, mean: f64) -> f64 {
        -mean * self.next_open01().ln()
    }

    /// Gamma draw with shape 2 and the given scale, as a sum of two
    /// independent exponentials.
    #[inline]
    pub fn next_gamma_shape2(&mut self, scale: f64) -> f64 {
        self.next_exponential(scale) + self.next_exponential(scale)
    }

    /// Draws `k` distinct indices from `0..n` by partial Fisher-Yates,
    /// returned in ascending order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        debug_assert!(k <= n);
        let mut pool: Vec<usize> = (0..n).collect();
        for t in 0..k {
            let j = t + self.next_below(n - t);
            pool.swap(t, j);
        }
        let mut picked = pool[..k].to_vec();
        picked.sort_unstable();
        picked
    }
}
