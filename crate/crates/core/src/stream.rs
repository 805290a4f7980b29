use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A reproducible random stream identified by a master seed and a derivation label.
///
/// The generator is ChaCha8 keyed by the seed with the label as its stream id, so
/// distinct labels under one seed give independent sequences. Child streams (per
/// instance, per trial) are derived with [`RandomStream::derive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RandomStream {
    pub seed: u64,
    pub label: u64,
}

impl RandomStream {
    pub fn new(seed: u64, label: u64) -> RandomStream {
        RandomStream { seed, label }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.label);
        rng
    }

    /// Child stream `index` of this stream.
    pub fn derive(&self, index: u64) -> RandomStream {
        RandomStream {
            seed: splitmix64(
                self.seed ^ splitmix64(self.label.wrapping_add(0x5851_f42d_4c95_7f2d)),
            ),
            label: index,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Fair coin flips drawn LSB-first from successive `u64` outputs of an rng.
pub struct CoinFlips<'a, R: RngCore + ?Sized> {
    rng: &'a mut R,
    word: u64,
    left: u32,
}

impl<'a, R: RngCore + ?Sized> CoinFlips<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        CoinFlips {
            rng,
            word: 0,
            left: 0,
        }
    }

    #[inline]
    pub fn flip(&mut self) -> bool {
        if self.left == 0 {
            self.word = self.rng.next_u64();
            self.left = 64;
        }
        let bit = self.word & 1 == 1;
        self.word >>= 1;
        self.left -= 1;
        bit
    }
}
