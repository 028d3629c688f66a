//! Quadrature rules and grid interpolation for the 1-D flow module.

use crate::util::pairwise_sum;

/// Gauss-Legendre nodes and weights on [-1, 1].
///
/// Newton iteration on the Legendre polynomial from the Chebyshev initial
/// guess; standard and deterministic.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// 4th-order end-corrected trapezoid (Gregory) rule on a uniform grid.
pub fn gregory4(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 8, "gregory4 needs at least 8 points");
    let mut w = vec![1.0; n];
    // Gregory weights of order 4: 3/8, 7/6, 23/24 at each end.
    w[0] = 3.0 / 8.0;
    w[1] = 7.0 / 6.0;
    w[2] = 23.0 / 24.0;
    w[n - 1] = 3.0 / 8.0;
    w[n - 2] = 7.0 / 6.0;
    w[n - 3] = 23.0 / 24.0;
    let terms: Vec<f64> = values.iter().zip(&w).map(|(v, w)| v * w).collect();
    h * pairwise_sum(&terms)
}

/// Local Lagrange interpolation of uniform-grid samples on a sliding
/// window of `W` points; error is O(h^W) for smooth data.
fn interp_window<const W: usize>(grid_lo: f64, h: f64, values: &[f64], x: f64) -> f64 {
    let n = values.len();
    assert!(n >= W);
    let pos = (x - grid_lo) / h;
    let mut start = pos.floor() as isize - (W as isize / 2 - 1);
    start = start.clamp(0, n as isize - W as isize);
    let start = start as usize;
    let mut acc = 0.0;
    for j in 0..W {
        let xj = (start + j) as f64;
        let mut l = 1.0;
        for k in 0..W {
            if k != j {
                let xk = (start + k) as f64;
                l *= (pos - xk) / (xj - xk);
            }
        }
        acc += l * values[start + j];
    }
    acc
}

/// 8-point local interpolation (O(h^8)).
pub fn interp8(grid_lo: f64, h: f64, values: &[f64], x: f64) -> f64 {
    interp_window::<8>(grid_lo, h, values, x)
}

/// 12-point local interpolation (O(h^12)), used where quadrature targets
/// sit near the 1e-10 scale.
pub fn interp12(grid_lo: f64, h: f64, values: &[f64], x: f64) -> f64 {
    interp_window::<12>(grid_lo, h, values, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(8);
        // degree 15 is exact for 8 nodes
        let val: f64 = x.iter().zip(&w).map(|(&x, &w)| w * x.powi(14)).sum();
        assert!((val - 2.0 / 15.0).abs() < 1e-13);
    }

    #[test]
    fn gregory_beats_trapezoid_on_smooth_data() {
        let n = 129;
        let h = 1.0 / (n - 1) as f64;
        let vals: Vec<f64> = (0..n).map(|i| (i as f64 * h).exp()).collect();
        let exact = std::f64::consts::E - 1.0;
        assert!((gregory4(&vals, h) - exact).abs() < 1e-9);
    }

    #[test]
    fn interp8_reproduces_polynomials() {
        let n = 32;
        let h = 2.0 / (n - 1) as f64;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let x = -1.0 + i as f64 * h;
                1.0 + x + x.powi(5)
            })
            .collect();
        let x = 0.3137;
        assert!((interp8(-1.0, h, &vals, x) - (1.0 + x + x.powi(5))).abs() < 1e-12);
    }
}
