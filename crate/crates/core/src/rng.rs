//! The 64-bit LCG used for all seeded sampling.
//!
//! `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
//! and each draw returns the high 32 bits of the new state. The stream is
//! simple enough to reproduce bit-for-bit in any language.

#[derive(Clone, Debug)]
pub struct Lcg64 {
    state: u64,
}

const MUL: u64 = 6364136223846793005;
const INC: u64 = 1442695040888963407;

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(MUL).wrapping_add(INC);
        (self.state >> 32) as u32
    }

    /// Uniform integer in `[-bound, bound]` as `next_u32 mod (2 bound + 1)`
    /// shifted down by `bound`.
    pub fn symmetric_int(&mut self, bound: u32) -> i64 {
        let span = 2 * bound as u64 + 1;
        (self.next_u32() as u64 % span) as i64 - bound as i64
    }

    /// Uniform `f64` in `[0, 1)` from one draw.
    pub fn unit_f64(&mut self) -> f64 {
        self.next_u32() as f64 / 4294967296.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_draws_from_zero() {
        let mut r = Lcg64::new(0);
        // state1 = INC, state2 = INC * MUL + INC (mod 2^64)
        assert_eq!(r.next_u32(), (INC >> 32) as u32);
        let s2 = INC.wrapping_mul(MUL).wrapping_add(INC);
        assert_eq!(r.next_u32(), (s2 >> 32) as u32);
    }

    #[test]
    fn symmetric_range() {
        let mut r = Lcg64::new(42);
        for _ in 0..10_000 {
            let v = r.symmetric_int(3);
            assert!((-3..=3).contains(&v));
        }
    }
}
