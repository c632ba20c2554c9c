//! Deterministic sampling. All randomness derives from one 64-bit seed fed to
//! a counter-based ChaCha generator; independent consumers use distinct streams.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geometry::Point;

/// Offset length scales, relative to the sampling radius, cycled through by [`PairSampler`].
pub const LENGTH_SCALES: [f64; 3] = [1e-1, 1e-3, 1e-5];

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws point pairs `(x, x + σ·N(0, I))` with `x` uniform in a disk of the
/// given radius and `σ` cycling through [`LENGTH_SCALES`] times that radius.
pub struct PairSampler {
    rng: ChaCha8Rng,
    radius: f64,
}

impl PairSampler {
    pub fn new(seed: u64, stream: u64, radius: f64) -> Self {
        Self { rng: seeded_rng(seed, stream), radius }
    }

    pub fn uniform_in_disk(&mut self) -> Point {
        let r = self.radius * self.rng.random::<f64>().sqrt();
        let a = TAU * self.rng.random::<f64>();
        Point::new(r * a.cos(), r * a.sin())
    }

    pub fn gaussian(&mut self) -> Point {
        Point::new(self.rng.sample(StandardNormal), self.rng.sample(StandardNormal))
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Pair number `index`, with both points satisfying `accept`.
    pub fn pair(&mut self, index: usize, accept: impl Fn(&Point) -> bool) -> (Point, Point) {
        let sigma = LENGTH_SCALES[index % LENGTH_SCALES.len()] * self.radius;
        loop {
            let x = self.uniform_in_disk();
            if !accept(&x) {
                continue;
            }
            for _ in 0..64 {
                let y = x + sigma * self.gaussian();
                if y != x && accept(&y) {
                    return (x, y);
                }
            }
        }
    }
}
