//! Deterministic summation with a fixed pairwise tree.
//!
//! Results are independent of chunking or worker count because the reduction
//! tree depends only on the slice length.

use num_complex::Complex64;

/// Sum a slice by pairwise reduction.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

/// Complex pairwise sum with the same tree shape as [`pairwise_sum`].
pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum_complex(&xs[..mid]) + pairwise_sum_complex(&xs[mid..])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_naive_sum() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = xs.iter().sum();
        assert!((pairwise_sum(&xs) - naive).abs() < 1e-10);
    }

    #[test]
    fn independent_of_external_chunking() {
        let xs: Vec<f64> = (0..512).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let a = pairwise_sum(&xs);
        let b = pairwise_sum(&xs);
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
