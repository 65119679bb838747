//! Seeded sample grids. Points have small denominators so that exact
//! arithmetic stays cheap, and land on corners often enough to matter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropical_theta::lattice::LatticeVector;
use tropical_theta::rational::{rat, Rational};
use tropical_theta::trop_av::TropPoint;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let den = rng.gen_range(1..=12);
    rat(rng.gen_range(-bound * den..=bound * den), den)
}

pub fn point(rng: &mut ChaCha8Rng, g: usize) -> TropPoint {
    TropPoint::new((0..g).map(|_| rational(rng, 4)).collect())
}

/// A nonzero lattice vector with entries in `[-3, 3]`.
pub fn shift(rng: &mut ChaCha8Rng, g: usize) -> LatticeVector {
    loop {
        let n: LatticeVector = (0..g).map(|_| rng.gen_range(-3..=3)).collect();
        if n.iter().any(|&k| k != 0) {
            return n;
        }
    }
}
