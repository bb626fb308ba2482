//! Seeded pseudo-randomness for generators and randomized strategies.
//!
//! Everything seeded in this crate runs on SplitMix64 (Steele, Lea and
//! Flood's `splitmix64`), a fixed, portable 64-bit generator: identical
//! seeds give identical streams on every platform, which the reproducible
//! traces and campaign reports rely on.

/// The SplitMix64 generator.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw in `0..n` by reduction modulo `n`. The modulo bias
    /// is negligible for the small ranges used here and keeps the mapping
    /// trivially portable.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        self.next_u64() % n
    }
}
