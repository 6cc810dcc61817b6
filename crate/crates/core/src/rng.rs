//! Seeded pseudo-random numbers.
//!
//! The generator is xorshift64* (Marsaglia's xorshift with shifts 12, 25, 27
//! followed by multiplication by 0x2545F4914F6CDD1D). Seeds are first passed
//! through one SplitMix64 step so that small or related seeds give unrelated
//! streams, and a zero state is never used. Every randomised routine in the
//! crate draws from this generator, so results are reproducible from the
//! seed alone.

#[derive(Clone, Debug)]
pub struct XorShift64 {
    state: u64,
}

/// One SplitMix64 output for `x`.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl XorShift64 {
    pub fn new(seed: u64) -> Self {
        let s = splitmix64(seed);
        XorShift64 { state: if s == 0 { 0x2545_F491_4F6C_DD1D } else { s } }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in `0..n` (`n > 0`), by rejection.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let r = self.next_u64();
            if r < zone {
                return r % n;
            }
        }
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.below(n as u64) as usize
    }

    /// An independent stream derived from this one and a label.
    pub fn fork(&mut self, label: u64) -> XorShift64 {
        XorShift64::new(self.next_u64() ^ splitmix64(label))
    }
}
