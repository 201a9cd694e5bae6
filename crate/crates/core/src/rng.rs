//! Portable, splittable pseudo-random number generation.
//!
//! Experiments here are seed-dependent, so reproducibility across runs and
//! across language ports matters more than statistical exotica. The
//! generator is fully specified by this module:
//!
//! * State initialization: four rounds of SplitMix64 over the seed
//!   (Steele/Lea/Flood 2014), guaranteeing a nonzero xoshiro state.
//! * Stream: xoshiro256** (Blackman/Vigna 2018), a 64-bit shift/rotate
//!   generator with period 2^256 - 1.
//! * Uniform doubles: the top 53 bits, `(x >> 11) * 2^-53`, in `[0, 1)`.
//! * Standard normals: Box-Muller on two consecutive uniforms, consuming
//!   `u1` then `u2` and yielding the cosine variate first; the sine variate
//!   is cached and returned on the next call.
//!
//! Any implementation following the above reproduces identical streams.

/// SplitMix64 mixing step; also usable for deriving child seeds.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// xoshiro256** generator with Box-Muller normal variates.
#[derive(Clone, Debug)]
pub struct Prng {
    state: [u64; 4],
    cached_normal: Option<f64>,
}

impl Prng {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let state = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Self { state, cached_normal: None }
    }

    /// Derives an independent child generator. The child seed is
    /// `splitmix64(seed + stream)` so distinct stream labels give
    /// uncorrelated sequences and the derivation is itself portable.
    pub fn derive(seed: u64, stream: u64) -> Self {
        let mut sm = seed.wrapping_add(stream);
        Self::new(splitmix64(&mut sm))
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Standard normal variate (mean 0, variance 1).
    pub fn next_standard_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        // u1 in (0, 1] so the log is finite
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.cached_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Standard complex normal: independent N(0,1) real and imaginary parts,
    /// real part drawn first.
    pub fn next_complex_normal(&mut self) -> num_complex::Complex64 {
        let re = self.next_standard_normal();
        let im = self.next_standard_normal();
        num_complex::Complex64::new(re, im)
    }
}
