//! Seeded random draws for the synthetic generators and tests.
//!
//! A thin wrapper around ChaCha8 so every randomized construction in the
//! crate is reproducible from a single u64 seed, independent of the `rand`
//! front-end API.

use crate::{CMat, CVec};
use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Rng {
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn usize_below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.inner.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let mut u1 = self.uniform();
        if u1 < 1e-300 {
            u1 = 1e-300;
        }
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal()) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_vector(&mut self, n: usize) -> CVec {
        CVec::from_fn(n, |_, _| self.complex_normal())
    }

    pub fn gaussian_matrix(&mut self, rows: usize, cols: usize) -> CMat {
        let mut m = CMat::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = self.complex_normal();
            }
        }
        m
    }

    /// Haar-ish random unitary: QR of a complex Gaussian with the phase of
    /// the R diagonal absorbed into Q.
    pub fn unitary(&mut self, n: usize) -> CMat {
        let g = self.gaussian_matrix(n, n);
        let qr = g.qr();
        let mut q = qr.q();
        let r = qr.r();
        for j in 0..n {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
        q
    }

    /// Random Hermitian matrix with unit operator norm.
    pub fn hermitian_unit(&mut self, n: usize) -> CMat {
        let g = self.gaussian_matrix(n, n);
        let h = (&g + g.adjoint()) * Complex64::new(0.5, 0.0);
        let scale = h
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .cloned()
            .fold(0.0f64, f64::max);
        if scale > 0.0 {
            h / Complex64::new(scale, 0.0)
        } else {
            h
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = Rng::seed_from_u64(7);
        let u = rng.unitary(5);
        let err = (u.adjoint() * &u - CMat::identity(5, 5)).norm();
        assert!(err < 1e-12, "unitarity defect {err}");
    }

    #[test]
    fn seeded_draws_reproduce() {
        let mut a = Rng::seed_from_u64(11);
        let mut b = Rng::seed_from_u64(11);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
        }
    }
}
