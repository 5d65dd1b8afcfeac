//! Deterministic counter-based pseudo-random streams.
//!
//! The generator is fixed: sample `i` of the stream with key `key` is
//! `mix64(key + (i + 1) * 0x9E3779B97F4A7C15)` where `mix64` is the
//! splitmix64 finalizer. Every draw is a pure function of `(key, index)`,
//! so partitioning work across any number of workers cannot change a
//! single sample. Volume estimation derives one key per `(seed, cell)`
//! and indexes samples by `point * dim + axis`.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// splitmix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A keyed random-access stream of uniform values.
#[derive(Debug, Clone, Copy)]
pub struct CounterStream {
    key: u64,
}

impl CounterStream {
    pub fn new(key: u64) -> Self {
        CounterStream { key }
    }

    /// Stream for cell `cell_index` of the run seeded with `seed`.
    pub fn for_cell(seed: u64, cell_index: u64) -> Self {
        CounterStream {
            key: mix64(seed ^ mix64(cell_index.wrapping_add(0x5EED_CE11))),
        }
    }

    #[inline]
    pub fn u64_at(&self, index: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform double in [0, 1) with 53 random bits.
    #[inline]
    pub fn f64_at(&self, index: u64) -> f64 {
        (self.u64_at(index) >> 11) as f64 * (1.0 / 9007199254740992.0)
    }
}

/// Small stateful generator for test inputs and verification suites.
/// Same mixing function, sequential counter.
#[derive(Debug, Clone)]
pub struct SplitMix {
    state: u64,
}

impl SplitMix {
    pub fn new(seed: u64) -> Self {
        SplitMix { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform in 0..n.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Signed integer in [-n, n].
    pub fn int_in(&mut self, n: i64) -> i64 {
        (self.below(2 * n as u64 + 1) as i64) - n
    }

    /// Random rational with numerator in [-max, max] and denominator in [1, max].
    pub fn rational(&mut self, max: i64) -> crate::exactnum::Rational {
        let num = self.int_in(max);
        let den = 1 + self.below(max as u64) as i64;
        crate::exactnum::Rational::ratio(num, den)
    }
}
