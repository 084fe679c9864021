#![allow(dead_code)]

use paircorr::sequences::{gen_kronecker, gen_multiset, gen_uniform, gen_vdc, PointSet};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub const BETAS: [f64; 5] = [0.0, 0.3, 0.5, 0.8, 1.0];

pub struct Draw(ChaCha8Rng);

impl Draw {
    pub fn new(seed: u64) -> Self {
        Draw(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.int(0, items.len() - 1)]
    }

    /// A point set of size `n` from a randomly chosen family: i.i.d. uniform,
    /// heavy multisets, dyadic lattices (exact tie distances), van der Corput
    /// and Kronecker.
    pub fn point_set(&mut self, n: usize) -> PointSet<f64> {
        match self.int(0, 4) {
            0 => gen_uniform(n, self.u64()).unwrap(),
            1 => {
                let m = self.int(1, n.clamp(1, 50));
                gen_multiset(m, n, self.u64()).unwrap()
            }
            2 => {
                let bits = self.int(2, 12) as i32;
                let cells = 1u64 << bits;
                let pts = (0..n)
                    .map(|_| (self.u64() % cells) as f64 / cells as f64)
                    .collect();
                PointSet::from_values(pts).unwrap()
            }
            3 => gen_vdc(self.pick(&[2, 3, 5]), n).unwrap(),
            _ => gen_kronecker(self.unit() * 10.0, n).unwrap(),
        }
    }
}
