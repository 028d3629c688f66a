//! Futaki limits and norms from weight tables: exact per-degree lattice
//! sums, polynomial fits on the upper half of the degree range, and a
//! stability gate on the fitted leading coefficient.

use super::table::TorusWeightTable;
use super::FutakiError;
use crate::util::polyfit::{fit_rms, polyfit};
use crate::util::pairwise_sum;

/// `Tr(e^{⟨·,V⟩})` over the degree-k weights: an exact sum in fixed order.
pub fn trace_exp(table: &TorusWeightTable, v: &[f64], k: usize) -> Result<f64, FutakiError> {
    let ws = table.weights(k)?;
    let terms: Vec<f64> = ws
        .iter()
        .map(|w| {
            let dot: f64 = w.iter().zip(v).map(|(a, b)| a * b).sum();
            dot.exp()
        })
        .collect();
    Ok(pairwise_sum(&terms))
}

/// A fitted Futaki value with its diagnostics.
#[derive(Debug, Clone)]
pub struct FutakiValue {
    pub value: f64,
    /// Per-degree data D(k).
    pub per_k: Vec<f64>,
    /// Fit window (inclusive degrees).
    pub window: (usize, usize),
    /// RMS residual of the fit on the window.
    pub fit_residual: f64,
    /// Relative change of the leading coefficient under a window shift.
    pub stability_delta: f64,
}

/// Fit window: the upper half of the degree range, widened if needed so
/// the degree-`fit_degree` fit is overdetermined.
pub(crate) fn fit_window(kmax: usize, fit_degree: usize) -> Option<usize> {
    let need = fit_degree + 2; // one extra point beyond interpolation
    if kmax < need + 1 {
        return None;
    }
    Some((kmax / 2).min(kmax - need).max(1))
}

/// Leading coefficient of the upper-half-window fit.
pub(crate) fn window_lead(per_k: &[f64], kmax: usize, fit_degree: usize) -> f64 {
    let lo = fit_window(kmax, fit_degree).expect("window checked by caller");
    let ks: Vec<f64> = (lo..=kmax).map(|k| k as f64).collect();
    let ys: Vec<f64> = (lo..=kmax).map(|k| per_k[k - 1]).collect();
    polyfit(&ks, &ys, fit_degree)[fit_degree]
}

/// Fit the leading coefficient of data `(k, D(k))` by a polynomial of
/// degree `fit_degree` over the upper half of the range, with a stability
/// gate under dropping the smallest window degree.
///
/// The gate is relative with an absolute floor at `1e-4` of the natural
/// magnitude of the data (`abs_scale`, the largest absolute-value sum
/// normalized by `kmax^degree`): limits that vanish by cancellation sit
/// far below that floor and must not be flagged, while a genuinely
/// untrustworthy extrapolation wobbles above it.
fn fitted_leading(
    per_k: &[f64],
    abs_per_k: &[f64],
    kmax: usize,
    fit_degree: usize,
) -> Result<(f64, (usize, usize), f64, f64), FutakiError> {
    let Some(lo) = fit_window(kmax, fit_degree) else {
        return Err(FutakiError::TableTooShallow {
            kmax,
            need: fit_degree + 3,
        });
    };
    let ks: Vec<f64> = (lo..=kmax).map(|k| k as f64).collect();
    let ys: Vec<f64> = (lo..=kmax).map(|k| per_k[k - 1]).collect();
    let coeffs = polyfit(&ks, &ys, fit_degree);
    let lead = coeffs[fit_degree];
    let residual = fit_rms(&coeffs, &ks, &ys);

    // Window shifted by one (drop the smallest degree), if enough points.
    let lead_shifted = if ks.len() > fit_degree + 2 {
        let coeffs2 = polyfit(&ks[1..], &ys[1..], fit_degree);
        coeffs2[fit_degree]
    } else {
        lead
    };
    let abs_scale = abs_per_k.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
        / (kmax as f64).powi(fit_degree as i32);
    let diff = (lead - lead_shifted).abs();
    let delta = diff
        / lead
            .abs()
            .max(lead_shifted.abs())
            .max(1e-4 * abs_scale)
            .max(1e-300);
    Ok((lead, (lo, kmax), residual, delta))
}

/// The modified Futaki pairing `Fut_V(V')` by exact per-degree sums
/// `D(k) = Σ_w ⟨w,V'⟩ e^{⟨w,V⟩/k}` and a degree-(n+1) fit of the leading
/// coefficient over the upper half of the degree range.
///
/// The k-normalized exponent keeps the twisted sums on the polynomial
/// growth scale, so `D(k)/k^{n+1}` converges to the Tian-Zhu pairing
/// `∫_P ⟨x,V'⟩ e^{⟨x,V⟩} dx`; the sign convention makes the associated
/// convex-function proxy have positive-definite Hessian.
pub fn futaki_limit(
    table: &TorusWeightTable,
    v: &[f64],
    vprime: &[f64],
) -> Result<FutakiValue, FutakiError> {
    let n = table.complex_dim();
    let kmax = table.kmax();
    if kmax < n + 3 {
        return Err(FutakiError::TableTooShallow { kmax, need: n + 3 });
    }
    if v.len() != table.rank() || vprime.len() != table.rank() {
        return Err(FutakiError::Invalid(
            "probe vectors must match the table rank".into(),
        ));
    }
    let (per_k, abs_per_k) = twisted_sums_with_scale(table, v, vprime)?;
    let (lead, window, fit_residual, delta) = fitted_leading(&per_k, &abs_per_k, kmax, n + 1)?;
    if delta > 1e-3 {
        return Err(FutakiError::UnstableExtrapolation { delta });
    }
    Ok(FutakiValue {
        value: lead,
        per_k,
        window,
        fit_residual,
        stability_delta: delta,
    })
}

pub(crate) fn twisted_sums(
    table: &TorusWeightTable,
    v: &[f64],
    vprime: &[f64],
) -> Result<Vec<f64>, FutakiError> {
    twisted_sums_with_scale(table, v, vprime).map(|(p, _)| p)
}

/// Twisted sums together with their absolute-value counterparts (the
/// natural magnitude against which cancellation is measured).
pub(crate) fn twisted_sums_with_scale(
    table: &TorusWeightTable,
    v: &[f64],
    vprime: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), FutakiError> {
    let mut per_k = Vec::with_capacity(table.kmax());
    let mut abs_per_k = Vec::with_capacity(table.kmax());
    for k in 1..=table.kmax() {
        let ws = table.weights(k)?;
        let terms: Vec<f64> = ws
            .iter()
            .map(|w| {
                let pairing: f64 = w.iter().zip(vprime).map(|(a, b)| a * b).sum();
                let twist: f64 =
                    w.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() / k as f64;
                pairing * twist.exp()
            })
            .collect();
        let abs_terms: Vec<f64> = terms.iter().map(|t| t.abs()).collect();
        per_k.push(pairwise_sum(&terms));
        abs_per_k.push(pairwise_sum(&abs_terms));
    }
    Ok((per_k, abs_per_k))
}

/// Donaldson-Futaki and N₂ data of a central fiber with an explicit
/// generator weight per basis element per degree.
#[derive(Debug, Clone)]
pub struct FutakiReport {
    pub fut: FutakiValue,
    /// `N₂²` as the fitted leading coefficient of the centered second
    /// moment (external norm definition from the cited reference).
    pub n2_squared: f64,
    pub n2: f64,
    /// `Fut / N₂`; absent when N₂ vanishes.
    pub ratio: Option<f64>,
    pub n2_stability_delta: f64,
}

/// Compute `Fut` (pairing of the generator weights at V = 0) and the
/// centered second-moment norm `N₂` with its fitted limit:
/// `N₂² = lim k^{-n-2} (Tr A_k² - (Tr A_k)²/N(k))`.
pub fn df_and_n2(
    table: &TorusWeightTable,
    generator_weights: &[Vec<f64>],
) -> Result<FutakiReport, FutakiError> {
    let n = table.complex_dim();
    let kmax = table.kmax();
    if generator_weights.len() < kmax {
        return Err(FutakiError::Invalid(format!(
            "need generator weights for all {kmax} degrees"
        )));
    }
    for k in 1..=kmax {
        if generator_weights[k - 1].len() != table.count(k) {
            return Err(FutakiError::Invalid(format!(
                "degree {k}: {} generator weights for {} basis elements",
                generator_weights[k - 1].len(),
                table.count(k)
            )));
        }
    }

    // Fut: D(k) = Σ_j A_k[j] (the V = 0 pairing with the generator).
    let fut_per_k: Vec<f64> = (1..=kmax)
        .map(|k| pairwise_sum(&generator_weights[k - 1]))
        .collect();
    let fut_abs: Vec<f64> = (1..=kmax)
        .map(|k| {
            let abs: Vec<f64> = generator_weights[k - 1].iter().map(|x| x.abs()).collect();
            pairwise_sum(&abs)
        })
        .collect();
    let (fut_lead, window, fit_residual, fut_delta) =
        fitted_leading(&fut_per_k, &fut_abs, kmax, n + 1)?;
    if fut_delta > 1e-3 {
        return Err(FutakiError::UnstableExtrapolation { delta: fut_delta });
    }

    // N₂²: centered second moment, degree n+2 fit.
    let mut q_per_k = Vec::with_capacity(kmax);
    let mut q_abs = Vec::with_capacity(kmax);
    for k in 1..=kmax {
        let a = &generator_weights[k - 1];
        let count = a.len() as f64;
        let tr: f64 = pairwise_sum(a);
        let tr2_terms: Vec<f64> = a.iter().map(|x| x * x).collect();
        let tr2 = pairwise_sum(&tr2_terms);
        q_per_k.push(tr2 - tr * tr / count);
        q_abs.push(tr2 + tr * tr / count);
    }
    let (n2_sq, _, _, n2_delta) = fitted_leading(&q_per_k, &q_abs, kmax, n + 2)?;
    if n2_delta > 1e-3 {
        return Err(FutakiError::UnstableExtrapolation { delta: n2_delta });
    }
    let n2 = n2_sq.max(0.0).sqrt();
    let ratio = if n2 > 1e-9 {
        Some(fut_lead / n2)
    } else {
        None
    };

    Ok(FutakiReport {
        fut: FutakiValue {
            value: fut_lead,
            per_k: fut_per_k,
            window,
            fit_residual,
            stability_delta: fut_delta,
        },
        n2_squared: n2_sq,
        n2,
        ratio,
        n2_stability_delta: n2_delta,
    })
}
