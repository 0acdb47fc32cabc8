//! Seeded sampling of check points.
//!
//! The generator is xoshiro256++ seeded from a `u64` through SplitMix64, the
//! reference seeding procedure of its authors. A uniform double in `[0, 1)`
//! is `(x >> 11) * 2^-53` for each 64-bit output `x`, so any implementation
//! of the same two published generators reproduces the same points.

use num_complex::Complex64;
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: Xoshiro256PlusPlus,
}

impl PointSampler {
    pub fn new(seed: u64) -> Self {
        PointSampler {
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Real part uniform in `re`, imaginary part uniform in `im`.
    pub fn complex_in(&mut self, re: (f64, f64), im: (f64, f64)) -> Complex64 {
        let x = self.uniform(re.0, re.1);
        let y = self.uniform(im.0, im.1);
        Complex64::new(x, y)
    }

    /// Random complex vector of unit Euclidean norm.
    pub fn unit_vector(&mut self, len: usize) -> Vec<Complex64> {
        let v: Vec<Complex64> = (0..len)
            .map(|_| self.complex_in((-1.0, 1.0), (-1.0, 1.0)))
            .collect();
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|c| c / norm).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let mut a = PointSampler::new(7);
        let mut b = PointSampler::new(7);
        for _ in 0..100 {
            assert_eq!(a.unit().to_bits(), b.unit().to_bits());
        }
        assert_ne!(PointSampler::new(1).unit(), PointSampler::new(2).unit());
    }

    #[test]
    fn ranges() {
        let mut s = PointSampler::new(0);
        for _ in 0..1000 {
            let u = s.unit();
            assert!((0.0..1.0).contains(&u));
            let z = s.complex_in((-2.0, 2.0), (0.5, 3.0));
            assert!(z.im >= 0.5 && z.im < 3.0 && z.re >= -2.0 && z.re < 2.0);
        }
        let v = s.unit_vector(5);
        let n: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        assert!((n - 1.0).abs() < 1e-14);
    }
}
