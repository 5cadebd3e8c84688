use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use super::ParameterSet;
use crate::numerics::GaussRational;

/// Denominator of every sampled parameter.
const GRID: i64 = 256;
/// Share of classical samples that get complex `a` and `b`.
const COMPLEX_SHARE: f64 = 0.1;

/// Seeded source of grid-aligned parameters for one `(seed, id, index)`.
pub struct Draw {
    rng: ChaCha8Rng,
    pub index: u64,
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

impl Draw {
    /// The ChaCha key is `seed | fnv1a(id) | index`, so samples do not depend
    /// on scheduling order.
    pub fn new(seed: u64, id: &str, index: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        key[8..16].copy_from_slice(&fnv1a(id).to_le_bytes());
        key[16..24].copy_from_slice(&index.to_le_bytes());
        Draw { rng: ChaCha8Rng::from_seed(key), index }
    }

    fn grid(m: i64) -> GaussRational {
        GaussRational::real(Rational::from((Integer::from(m), Integer::from(GRID))))
    }

    /// Multiple of 1/256 strictly inside `(lo, hi)`.
    pub fn open(&mut self, lo: f64, hi: f64) -> GaussRational {
        let a = (lo * GRID as f64).floor() as i64 + 1;
        let b = (hi * GRID as f64).ceil() as i64 - 1;
        Self::grid(self.rng.gen_range(a..=b))
    }

    /// Multiple of 1/256 inside `[lo, hi]`.
    pub fn closed(&mut self, lo: f64, hi: f64) -> GaussRational {
        let a = (lo * GRID as f64).ceil() as i64;
        let b = (hi * GRID as f64).floor() as i64;
        Self::grid(self.rng.gen_range(a..=b))
    }

    pub fn integer(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// With probability 1/10, adds imaginary parts in `[-1, 1]` to the named
    /// parameters.
    pub fn complexify(&mut self, params: &mut ParameterSet, names: &[&str]) {
        if !self.chance(COMPLEX_SHARE) {
            return;
        }
        for name in names {
            let im = self.closed(-1.0, 1.0).re;
            let mut v = params.exact(name).clone();
            v.im = im;
            params.insert(name, v);
        }
    }
}
