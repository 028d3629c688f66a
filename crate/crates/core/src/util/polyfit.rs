//! Least-squares polynomial fit with argument scaling for conditioning.

use nalgebra::{DMatrix, DVector};

/// Fit `ys ≈ p(xs)` with `deg(p) = degree`, returning coefficients in
/// ascending powers. The Vandermonde system is solved by QR on the scaled
/// variable `x / max|x|`.
///
/// Panics if there are fewer points than coefficients.
pub fn polyfit(xs: &[f64], ys: &[f64], degree: usize) -> Vec<f64> {
    let n = xs.len();
    let k = degree + 1;
    assert!(n >= k, "polyfit needs at least degree+1 points");
    let scale = xs.iter().fold(0.0f64, |a, &x| a.max(x.abs())).max(1.0);
    let v = DMatrix::from_fn(n, k, |i, j| (xs[i] / scale).powi(j as i32));
    let rhs = DVector::from_column_slice(ys);
    let sol = v
        .svd(true, true)
        .solve(&rhs, 1e-300)
        .expect("least squares solve");
    (0..k).map(|j| sol[j] / scale.powi(j as i32)).collect()
}

/// Evaluate ascending-power coefficients at `x`.
pub fn polyval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Root-mean-square residual of the fit on the given points.
pub fn fit_rms(coeffs: &[f64], xs: &[f64], ys: &[f64]) -> f64 {
    let s: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let d = polyval(coeffs, x) - y;
            d * d
        })
        .sum();
    (s / xs.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_cubic() {
        let xs: Vec<f64> = (1..=20).map(|k| k as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 - x + 0.5 * x.powi(3)).collect();
        let c = polyfit(&xs, &ys, 3);
        assert!((c[0] - 2.0).abs() < 1e-9);
        assert!((c[1] + 1.0).abs() < 1e-9);
        assert!(c[2].abs() < 1e-9);
        assert!((c[3] - 0.5).abs() < 1e-10);
    }
}
