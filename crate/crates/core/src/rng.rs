//! Counter-based pseudo-random streams.
//!
//! Every random draw in the toolkit comes from a [`Stream`]. A stream is a
//! 64-bit key plus a 64-bit counter, and the `i`-th output is a pure function
//! of `(key, i)`:
//!
//! ```text
//! out_i = mix64(key + i * 0x9E3779B97F4A7C15)      (wrapping arithmetic)
//! mix64(z):
//!     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!     z ^ (z >> 31)
//! ```
//!
//! This is the SplitMix64 generator read as a counter-mode function, so
//! results are identical on every platform. Substreams are derived by
//! hashing: `child_key = mix64(key ^ mix64(index + 0x632BE59BD9B4E019))`.
//! A design seeded with `s` uses `Stream::new(s).substream(j)` for factor
//! `j`, so adding factors never perturbs earlier columns.

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
const SUBSTREAM_SALT: u64 = 0x632B_E59B_D9B4_E019;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic stream of pseudo-random numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    /// Root stream for a user seed.
    pub fn new(seed: u64) -> Self {
        Stream {
            key: mix64(seed ^ GAMMA),
            counter: 0,
        }
    }

    /// Independent child stream identified by `index`. Does not consume
    /// values from `self`.
    pub fn substream(&self, index: u64) -> Stream {
        Stream {
            key: mix64(self.key ^ mix64(index.wrapping_add(SUBSTREAM_SALT))),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GAMMA)))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`.
    pub fn uniform_open0(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    /// Uniform in `[lo, hi)`.
    pub fn uniform_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Unbiased integer in `0..n` (Lemire's multiply-shift with rejection).
    ///
    /// Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let mut m = (self.next_u64() as u128) * (n as u128);
        let mut low = m as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                m = (self.next_u64() as u128) * (n as u128);
                low = m as u64;
            }
        }
        (m >> 64) as u64
    }

    /// Standard normal draw (Box–Muller, cosine branch only).
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Fisher–Yates shuffle, walking from the back.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// Random permutation of `0..n`.
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        self.shuffle(&mut p);
        p
    }
}
