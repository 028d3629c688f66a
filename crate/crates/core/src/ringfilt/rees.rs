//! Regrading to integer levels, Rees generators, and rational perturbation
//! of the weight vector.

use super::presentation::GradedRingPresentation;
#[cfg(test)]
use super::poly::SparsePoly;
use super::weighted::{initial_ideal, WeightedAnalysis};
use super::{RingError, RingFiltrationData};
use crate::linalg::subspace::{max_principal_angle, orthonormalize};
use crate::{CMat, CVec};
use num_rational::Rational64;
use num_traits::Signed;

/// Continued-fraction convergents of `x` with denominators up to `max_den`.
fn cf_convergents(x: f64, max_den: i64) -> Vec<Rational64> {
    let mut a = x.floor() as i64;
    let mut frac = x - a as f64;
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, a, 1i64);
    let mut out = vec![Rational64::new(p1, q1)];
    for _ in 0..64 {
        if frac.abs() < 1e-15 {
            break;
        }
        let inv = 1.0 / frac;
        a = inv.floor() as i64;
        frac = inv - a as f64;
        let (Some(p2), Some(q2)) = (
            a.checked_mul(p1).and_then(|v| v.checked_add(p0)),
            a.checked_mul(q1).and_then(|v| v.checked_add(q0)),
        ) else {
            break;
        };
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        out.push(Rational64::new(p1, q1));
    }
    out
}

/// First continued-fraction convergent within `tol`, denominator capped.
pub fn rational_approx(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    cf_convergents(x, max_den)
        .into_iter()
        .find(|r| (*r.numer() as f64 / *r.denom() as f64 - x).abs() <= tol)
}

/// Rational reconstruction with a quadratic certificate: accept `p/q` only
/// when the error is far below the generic continued-fraction error `1/q²`.
/// Every float has some convergent within 1e-9 at denominators up to 10⁶,
/// so the plain tolerance criterion alone cannot distinguish rational from
/// irrational data; the certificate makes the dichotomy computable.
pub fn rational_certify(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    cf_convergents(x, max_den).into_iter().find(|r| {
        let q = *r.denom() as f64;
        let err = (*r.numer() as f64 / q - x).abs();
        err <= tol && err <= 1e-3 / (q * q)
    })
}

/// Integer regrading of the filtration: shift, denominator, integer levels,
/// and Rees generators in low bidegree.
#[derive(Debug, Clone)]
pub struct ReesData {
    /// The shift `λ̲ = floor(min variable weight) - 1`.
    pub underline_lambda: i64,
    /// Smallest positive integer with `D·(shifted weights) ⊂ ℤ`.
    pub denominator: i64,
    /// Shifted rational variable weights.
    pub shifted_weights: Vec<Rational64>,
    /// Integer level of each adapted-basis class, per degree.
    pub levels: Vec<Vec<i64>>,
    /// Rees algebra generators: (degree k, level j, class coordinates).
    pub generators: Vec<(usize, i64, CVec)>,
}

/// Regrade the filtration to positive integer levels and compute Rees
/// generators up to bidegree (K, D·max-level).
pub fn regrade(
    filt: &RingFiltrationData,
    ring: &GradedRingPresentation,
) -> Result<ReesData, RingError> {
    let max_den = 1_000_000i64;
    let mut rational_weights = Vec::with_capacity(filt.var_weights.len());
    for &w in &filt.var_weights {
        let r = rational_certify(w, max_den, 1e-9).ok_or(RingError::IrrationalFiltration {
            value: w,
            max_den,
        })?;
        rational_weights.push(r);
    }
    for &j in &filt.jumps {
        if rational_certify(j, max_den, 1e-9).is_none() {
            return Err(RingError::IrrationalFiltration {
                value: j,
                max_den,
            });
        }
    }
    let min_w = rational_weights
        .iter()
        .cloned()
        .fold(Rational64::new(i64::MAX, 1), |a, b| a.min(b));
    let underline_lambda = min_w.floor().to_integer() - 1;
    let shifted: Vec<Rational64> = rational_weights
        .iter()
        .map(|w| w - Rational64::from_integer(underline_lambda))
        .collect();
    let denominator = shifted
        .iter()
        .fold(1i64, |acc, w| lcm(acc, *w.denom()));

    // Integer levels of the adapted basis classes.
    let analysis = WeightedAnalysis::new(ring, &filt.var_weights)?;
    let mut levels: Vec<Vec<i64>> = Vec::with_capacity(ring.truncation() + 1);
    for k in 0..=ring.truncation() {
        let mut lv = Vec::new();
        for &(_, d) in analysis.adapted_basis(k) {
            let shifted_weight = d - underline_lambda as f64 * k as f64;
            let level = (denominator as f64 * shifted_weight).round() as i64;
            debug_assert!(
                (denominator as f64 * shifted_weight - level as f64).abs() < 1e-6,
                "level must be integral"
            );
            lv.push(level);
        }
        levels.push(lv);
    }

    // Rees generators: sweep bidegrees (k, j) upward; pieces not generated
    // by products of earlier generators contribute new ones. Multiplication
    // by t is implicit: the generated span at (k, j) contains the span at
    // (k, j-1).
    let trunc = ring.truncation();
    let max_level: i64 = levels
        .iter()
        .flat_map(|lv| lv.iter().copied())
        .max()
        .unwrap_or(0);
    let mut generators: Vec<(usize, i64, CVec)> = Vec::new();
    // generated[k] = accumulated basis (columns) of the generated subspace
    // of R_k at the current level sweep.
    let mut generated: Vec<CMat> = (0..=trunc)
        .map(|k| CMat::zeros(ring.rk_dim(k).max(1), 0))
        .collect();
    // Unit of R_0 is always present.
    if ring.rk_dim(0) == 1 {
        generated[0] = CMat::from_element(1, 1, num_complex::Complex64::new(1.0, 0.0));
    }

    for j in 0..=max_level {
        for k in 1..=trunc {
            // Target: span of adapted classes with level ≤ j.
            let adapted = analysis.adapted_basis(k);
            let target_cols: Vec<usize> = (0..adapted.len())
                .filter(|&i| levels[k][i] <= j)
                .collect();
            if target_cols.is_empty() {
                continue;
            }
            // Extend the generated span by products of earlier generators.
            let mut new_cols: Vec<CVec> = Vec::new();
            for (kg, jg, class) in generators.clone() {
                if kg >= k || jg > j {
                    continue;
                }
                // product with generated pieces of complementary bidegree
                let other = &generated[k - kg];
                for c in 0..other.ncols() {
                    let col = other.column(c).into_owned();
                    let prod = ring.multiply_classes(kg, &class, k - kg, &col)?;
                    if prod.norm() > 1e-12 {
                        new_cols.push(prod);
                    }
                }
            }
            let mut span = generated[k].clone();
            for col in new_cols {
                span = append_column(&span, &col);
            }
            span = orthonormalize(&span);

            // Any deficiency inside the target becomes new generators.
            let dim_rk = ring.rk_dim(k);
            let mut target = CMat::zeros(dim_rk, target_cols.len());
            for (out, &i) in target_cols.iter().enumerate() {
                let (mono, _) = adapted[i];
                // Class coordinates of the adapted monomial.
                let mut dense = CVec::zeros(ring.basis(k).len());
                dense[mono] = num_complex::Complex64::new(1.0, 0.0);
                target.set_column(out, &ring.reduce_to_class(k, &dense));
            }
            for c in 0..target.ncols() {
                let cand = target.column(c).into_owned();
                let residual = residual_off_span(&span, &cand);
                if residual.norm() > 1e-9 {
                    let n = residual.norm();
                    let new_gen = residual / num_complex::Complex64::new(n, 0.0);
                    generators.push((k, j, new_gen.clone()));
                    span = orthonormalize(&append_column(&span, &new_gen));
                }
            }
            generated[k] = span;
        }
    }

    Ok(ReesData {
        underline_lambda,
        denominator,
        shifted_weights: shifted,
        levels,
        generators,
    })
}

fn append_column(m: &CMat, col: &CVec) -> CMat {
    let mut out = CMat::zeros(m.nrows(), m.ncols() + 1);
    for j in 0..m.ncols() {
        out.set_column(j, &m.column(j));
    }
    out.set_column(m.ncols(), col);
    out
}

fn residual_off_span(span: &CMat, v: &CVec) -> CVec {
    if span.ncols() == 0 {
        return v.clone();
    }
    v - span * (span.adjoint() * v)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Result of the rational perturbation search.
#[derive(Debug, Clone)]
pub struct PerturbResult {
    pub gamma: Vec<Rational64>,
    /// Degreewise equality of the initial ideal was certified up to this
    /// degree (the truncation); beyond it nothing is claimed.
    pub certified_up_to: usize,
    pub max_deviation: f64,
}

/// Find a rational weight vector Γ near the given weights preserving every
/// generator's strict top-weight monomial and the degreewise initial ideal
/// up to the truncation.
pub fn perturb_rational(
    ring: &GradedRingPresentation,
    var_weights: &[f64],
) -> Result<PerturbResult, RingError> {
    // Precondition: strict top-weight term per generator.
    let mut tops: Vec<(usize, Vec<Vec<u16>>)> = Vec::new();
    for g in ring.generators() {
        let weights: Vec<f64> = g
            .terms
            .iter()
            .map(|(e, _)| {
                e.iter()
                    .zip(var_weights)
                    .map(|(&a, &w)| a as f64 * w)
                    .sum()
            })
            .collect();
        let top = weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut top_idx = None;
        for (i, &w) in weights.iter().enumerate() {
            if (top - w).abs() <= 1e-9 {
                if top_idx.is_some() {
                    let gap = weights
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| Some(j) != top_idx)
                        .map(|(_, &w2)| top - w2)
                        .fold(f64::INFINITY, f64::min);
                    return Err(RingError::TieDetected { gap });
                }
                top_idx = Some(i);
            }
        }
        let idx = top_idx.expect("nonempty generator");
        let others: Vec<Vec<u16>> = g
            .terms
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, (e, _))| e.clone())
            .collect();
        tops.push((idx, others));
    }

    let reference = initial_ideal(ring, var_weights)?;

    // Candidate Γ's: tuples of continued-fraction convergents, one per
    // coordinate, at matching depth (padded with the deepest available).
    // Deeper candidates lie closer to the input; the deepest one passing
    // the strict-cone inequalities and the degreewise initial-ideal check
    // minimizes the deviation over the search family.
    let max_den = 1_000_000i64;
    let per_coord: Vec<Vec<Rational64>> = var_weights
        .iter()
        .map(|&w| cf_convergents(w, max_den))
        .collect();
    let max_depth = per_coord.iter().map(|c| c.len()).max().unwrap_or(1);
    let mut candidates: Vec<Vec<Rational64>> = Vec::new();
    for depth in 0..max_depth {
        let gamma: Vec<Rational64> = per_coord
            .iter()
            .map(|c| c[depth.min(c.len() - 1)])
            .collect();
        if candidates.last() != Some(&gamma) {
            candidates.push(gamma);
        }
    }
    for gamma in candidates.into_iter().rev() {
        // Strict cone condition, exact rational arithmetic.
        let strict = ring.generators().iter().zip(&tops).all(|(g, (idx, others))| {
            let top_exp = &g.terms[*idx].0;
            others.iter().all(|other| {
                let mut diff = Rational64::new(0, 1);
                for ((&a, &b), w) in top_exp.iter().zip(other.iter()).zip(&gamma) {
                    diff += Rational64::from_integer(a as i64 - b as i64) * w;
                }
                diff.is_positive()
            })
        });
        if !strict {
            continue;
        }
        let gamma_f: Vec<f64> = gamma
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        let candidate = initial_ideal(ring, &gamma_f)?;
        let mut same = true;
        for k in 0..=ring.truncation() {
            let a = &reference.initial_bases[k];
            let b = &candidate.initial_bases[k];
            if a.ncols() != b.ncols() {
                same = false;
                break;
            }
            if a.ncols() > 0 && max_principal_angle(a, b) > 1e-8 {
                same = false;
                break;
            }
        }
        if same {
            let max_dev = gamma_f
                .iter()
                .zip(var_weights)
                .map(|(g, w)| (g - w).abs())
                .fold(0.0f64, f64::max);
            return Ok(PerturbResult {
                gamma,
                certified_up_to: ring.truncation(),
                max_deviation: max_dev,
            });
        }
    }
    Err(RingError::PerturbationNotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringfilt::ring_filtration;

    fn conic(trunc: usize) -> GradedRingPresentation {
        let g = SparsePoly::from_real(&[(&[1, 0, 1], 1.0), (&[0, 2, 0], -1.0)]).unwrap();
        GradedRingPresentation::new(3, vec![g], trunc, None).unwrap()
    }

    #[test]
    fn rational_reconstruction_round_trips() {
        assert_eq!(rational_approx(0.5, 100, 1e-9), Some(Rational64::new(1, 2)));
        assert_eq!(
            rational_approx(-2.25, 100, 1e-9),
            Some(Rational64::new(-9, 4))
        );
        assert_eq!(rational_approx(1.0 / 3.0, 100, 1e-9), Some(Rational64::new(1, 3)));
        assert!(rational_approx(std::f64::consts::SQRT_2, 1000, 1e-12).is_none());
    }

    #[test]
    fn integer_weights_have_denominator_one() {
        let ring = conic(4);
        let filt = ring_filtration(&ring, &[1.0, 0.0, 0.0]).unwrap();
        let rees = regrade(&filt, &ring).unwrap();
        assert_eq!(rees.denominator, 1);
        assert_eq!(rees.underline_lambda, -1);
    }

    #[test]
    fn fractional_weights_take_the_lcm() {
        let free = GradedRingPresentation::new(2, vec![], 3, None).unwrap();
        let filt = ring_filtration(&free, &[0.5, 1.0 / 3.0]).unwrap();
        let rees = regrade(&filt, &free).unwrap();
        assert_eq!(rees.denominator, 6);
    }

    #[test]
    fn irrational_weights_are_refused() {
        let ring = conic(3);
        let filt = ring_filtration(&ring, &[std::f64::consts::SQRT_2, 0.0, 0.0]).unwrap();
        assert!(matches!(
            regrade(&filt, &ring),
            Err(RingError::IrrationalFiltration { .. })
        ));
    }

    #[test]
    fn rees_levels_are_positive_and_unit_is_level_zero() {
        let ring = conic(4);
        let filt = ring_filtration(&ring, &[1.0, 0.0, 0.0]).unwrap();
        let rees = regrade(&filt, &ring).unwrap();
        // Positivity: F'_0 R_k = 0 for k >= 1 means all levels >= 1.
        for k in 1..=4 {
            assert!(rees.levels[k].iter().all(|&l| l >= 1), "degree {k}");
        }
    }

    #[test]
    fn conic_rees_generators_span_degreewise() {
        // The special-fiber degreewise dimensions must equal dim R_k:
        // degreewise counts of adapted classes match the flat initial data.
        let ring = conic(4);
        let filt = ring_filtration(&ring, &[1.0, 0.0, 0.0]).unwrap();
        let rees = regrade(&filt, &ring).unwrap();
        let data = initial_ideal(&ring, &[1.0, 0.0, 0.0]).unwrap();
        for k in 1..=4usize {
            assert!(data.flat[k]);
            assert_eq!(rees.levels[k].len(), ring.rk_dim(k));
        }
        // Degree-1 generators must include all three variables.
        let degree1: Vec<_> = rees.generators.iter().filter(|(k, _, _)| *k == 1).collect();
        assert_eq!(degree1.len(), 3);
        // No generators should be needed in high degree for this ring:
        // everything above degree 1 is generated by products.
        assert!(rees.generators.iter().all(|(k, _, _)| *k <= 1));
    }

    #[test]
    fn already_rational_weights_are_kept() {
        let ring = conic(3);
        let result = perturb_rational(&ring, &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(
            result.gamma,
            vec![
                Rational64::new(1, 1),
                Rational64::new(0, 1),
                Rational64::new(0, 1)
            ]
        );
        assert_eq!(result.max_deviation, 0.0);
    }

    #[test]
    fn irrational_weight_gets_nearby_rational_with_same_initial_ideal() {
        let ring = conic(4);
        let w = [std::f64::consts::SQRT_2, 0.0, 1.0];
        let result = perturb_rational(&ring, &w).unwrap();
        assert!(result.max_deviation < 1e-6, "deviation {}", result.max_deviation);
        let gamma_f: Vec<f64> = result
            .gamma
            .iter()
            .map(|r| *r.numer() as f64 / *r.denom() as f64)
            .collect();
        let a = initial_ideal(&ring, &w).unwrap();
        let b = initial_ideal(&ring, &gamma_f).unwrap();
        for k in 0..=4 {
            assert_eq!(a.initial_bases[k].ncols(), b.initial_bases[k].ncols());
        }
    }

    #[test]
    fn tied_generator_weights_are_detected() {
        // xz - y² with weights (1,0,1): xz weighs 2, y² weighs 0 — no tie.
        // With weights (0,0,0) everything ties.
        let ring = conic(3);
        assert!(matches!(
            perturb_rational(&ring, &[0.0, 0.0, 0.0]),
            Err(RingError::TieDetected { .. })
        ));
    }
}
