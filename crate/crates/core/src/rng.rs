//! Household random stream.
//!
//! ChaCha20 seeded from a `u64` (`rand_chacha::ChaCha20Rng::seed_from_u64`).
//! Its position is the number of 32-bit words consumed, so `(seed, word_pos)`
//! restores the exact stream after a reload.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const ALGORITHM: &str = "chacha20";

#[derive(Clone, Debug)]
pub struct HouseholdRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl HouseholdRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn restore(seed: u64, word_pos: u64) -> Self {
        let mut rng = Self::from_seed(seed);
        rng.inner.set_word_pos(u128::from(word_pos));
        rng
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn word_pos(&self) -> u64 {
        // A u64 word counter covers far more draws than any household makes.
        self.inner.get_word_pos() as u64
    }
}

impl RngCore for HouseholdRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn restore_continues_the_stream() {
        let mut a = HouseholdRng::from_seed(7);
        let _: Vec<u64> = (0..13).map(|_| a.next_u64()).collect();
        let _ = a.next_u32();
        let mut b = HouseholdRng::restore(7, a.word_pos());
        for _ in 0..50 {
            assert_eq!(a.random::<f64>(), b.random::<f64>());
        }
    }
}
