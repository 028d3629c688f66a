//! Weight-graded analysis of the ideal: section weights by weight-graded
//! elimination, the multiplicative filtration, and initial ideals.
//!
//! Monomials of equal weight are grouped into blocks; the initial form of
//! an element is its entire top block (the weight order is not a monomial
//! order). The initial space `Ī_k` is spanned by the top blocks of a
//! weight-echelonized basis of the full `I_k`, not of the generators alone.

use super::poly::SparsePoly;
use super::presentation::GradedRingPresentation;
use super::RingError;
use crate::{CMat, CVec};
use num_complex::Complex64;

/// A weight-echelonized element of `I_k`.
#[derive(Debug, Clone)]
struct EchElem {
    vec: CVec,
    block: usize,
}

/// Weight blocks and echelon data for one degree.
#[derive(Debug, Clone)]
pub struct WeightedDegree {
    /// Distinct monomial weights, strictly decreasing.
    pub block_weights: Vec<f64>,
    /// Monomial indices of each block.
    pub block_monos: Vec<Vec<usize>>,
    elems: Vec<EchElem>,
    /// Within each block, the monomial indices that are pivots of the
    /// initial space (in-pivots) and the complement (adapted basis).
    in_pivots: Vec<Vec<usize>>,
    adapted: Vec<(usize, f64)>,
}

/// Reusable weight analysis of a ring presentation.
pub struct WeightedAnalysis<'a> {
    pub ring: &'a GradedRingPresentation,
    pub var_weights: Vec<f64>,
    degrees: Vec<WeightedDegree>,
}

const REL_TOL: f64 = 1e-9;

impl<'a> WeightedAnalysis<'a> {
    pub fn new(
        ring: &'a GradedRingPresentation,
        var_weights: &[f64],
    ) -> Result<Self, RingError> {
        if var_weights.len() != ring.num_vars() {
            return Err(RingError::Dimension(format!(
                "{} weights for {} variables",
                var_weights.len(),
                ring.num_vars()
            )));
        }
        let mut degrees = Vec::with_capacity(ring.truncation() + 1);
        for k in 0..=ring.truncation() {
            degrees.push(analyze_degree(ring, var_weights, k)?);
        }
        Ok(Self {
            ring,
            var_weights: var_weights.to_vec(),
            degrees,
        })
    }

    pub fn degree_data(&self, k: usize) -> &WeightedDegree {
        &self.degrees[k]
    }

    /// d(s) for a representative vector in `Sym^k` coordinates: the minimal
    /// top weight over the coset `s + I_k`, by weight-graded elimination.
    pub fn section_weight_dense(&self, k: usize, v: &CVec) -> Result<f64, RingError> {
        self.ring.check_degree(k)?;
        if k == 0 {
            // Convention: weight zero on the constants.
            if v.norm() == 0.0 {
                return Err(RingError::ZeroInQuotient);
            }
            return Ok(0.0);
        }
        let deg = &self.degrees[k];
        let (reduced, block) = reduce_by_echelon(deg, v.clone())?;
        let _ = reduced;
        Ok(deg.block_weights[block])
    }

    /// d(s) for a sparse polynomial.
    pub fn section_weight(&self, s: &SparsePoly) -> Result<f64, RingError> {
        let k = s.degree();
        self.ring.check_degree(k)?;
        let v = s.to_dense(self.ring.basis(k))?;
        self.section_weight_dense(k, &v)
    }

    /// Initial space basis of `Ī_k`: top blocks of the echelon, embedded as
    /// full-width columns.
    pub fn initial_basis(&self, k: usize) -> CMat {
        let deg = &self.degrees[k];
        let width = self.ring.basis(k).len();
        let mut m = CMat::zeros(width, deg.elems.len());
        for (j, e) in deg.elems.iter().enumerate() {
            let mut col = CVec::zeros(width);
            for &mono in &deg.block_monos[e.block] {
                col[mono] = e.vec[mono];
            }
            let n = col.norm();
            if n > 0.0 {
                col /= Complex64::new(n, 0.0);
            }
            m.set_column(j, &col);
        }
        m
    }

    /// Adapted (triangular) basis of `R_k`: classes of the non-in-pivot
    /// monomials, each with exact weight `d(s)`.
    pub fn adapted_basis(&self, k: usize) -> &[(usize, f64)] {
        &self.degrees[k].adapted
    }
}

fn analyze_degree(
    ring: &GradedRingPresentation,
    var_weights: &[f64],
    k: usize,
) -> Result<WeightedDegree, RingError> {
    let basis = ring.basis(k);
    let mono_weights = basis.weights(var_weights);
    let scale = mono_weights.iter().fold(1.0f64, |a, &w| a.max(w.abs()));
    let tie_tol = 1e-9 * scale;

    // Distinct weights, descending, with their monomial blocks.
    let mut order: Vec<usize> = (0..mono_weights.len()).collect();
    order.sort_by(|&a, &b| {
        mono_weights[b]
            .partial_cmp(&mono_weights[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut block_weights: Vec<f64> = Vec::new();
    let mut block_monos: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        let w = mono_weights[idx];
        match block_weights.last() {
            Some(&lw) if (lw - w).abs() <= tie_tol => {
                block_monos.last_mut().unwrap().push(idx);
            }
            _ => {
                block_weights.push(w);
                block_monos.push(vec![idx]);
            }
        }
    }
    let block_of_mono = {
        let mut map = vec![0usize; mono_weights.len()];
        for (b, monos) in block_monos.iter().enumerate() {
            for &m in monos {
                map[m] = b;
            }
        }
        map
    };

    let mut deg = WeightedDegree {
        block_weights,
        block_monos,
        elems: Vec::new(),
        in_pivots: Vec::new(),
        adapted: Vec::new(),
    };
    let _ = block_of_mono;

    // Weight-echelonize the full I_k.
    for raw in ring.ideal_rref_elements(k) {
        let mut v = raw.clone();
        let init_norm = v.norm().max(1e-300);
        loop {
            let Some(block) = top_block(&deg, &v, init_norm) else {
                // Reduced to zero: dependent, drop.
                break;
            };
            match express_in_block(&deg, block, &v) {
                Some(coeffs) => {
                    for (j, c) in coeffs {
                        let e = deg.elems[j].vec.clone();
                        v -= e * c;
                    }
                    // The block was consistent; zero it exactly.
                    for &mono in &deg.block_monos[block] {
                        v[mono] = Complex64::new(0.0, 0.0);
                    }
                }
                None => {
                    let n = v.norm();
                    v /= Complex64::new(n, 0.0);
                    deg.elems.push(EchElem { vec: v, block });
                    break;
                }
            }
        }
    }

    // In-pivot monomials per block: pivots of the stacked top blocks.
    deg.in_pivots = vec![Vec::new(); deg.block_weights.len()];
    for b in 0..deg.block_weights.len() {
        let monos = &deg.block_monos[b];
        let members: Vec<&EchElem> = deg.elems.iter().filter(|e| e.block == b).collect();
        if members.is_empty() {
            continue;
        }
        let mut m = CMat::zeros(monos.len(), members.len());
        for (j, e) in members.iter().enumerate() {
            for (r, &mono) in monos.iter().enumerate() {
                m[(r, j)] = e.vec[mono];
            }
        }
        // Column-pivoted elimination over rows to find pivot monomials.
        let mut pivots = Vec::new();
        let mut work = m.clone();
        for col in 0..work.ncols() {
            let (mut best_row, mut best_mag) = (None, 0.0f64);
            for r in 0..work.nrows() {
                if pivots.contains(&r) {
                    continue;
                }
                let mag = work[(r, col)].norm();
                if mag > best_mag {
                    best_mag = mag;
                    best_row = Some(r);
                }
            }
            let Some(pr) = best_row else { continue };
            if best_mag <= 1e-10 {
                continue;
            }
            // Eliminate this row's column from later columns.
            for c2 in (col + 1)..work.ncols() {
                let factor = work[(pr, c2)] / work[(pr, col)];
                for r in 0..work.nrows() {
                    let sub = work[(r, col)] * factor;
                    work[(r, c2)] -= sub;
                }
            }
            pivots.push(pr);
        }
        deg.in_pivots[b] = pivots.iter().map(|&r| monos[r]).collect();
    }

    // Adapted basis: non-in-pivot monomials, by descending weight.
    for (b, monos) in deg.block_monos.iter().enumerate() {
        for &mono in monos {
            if !deg.in_pivots[b].contains(&mono) {
                deg.adapted.push((mono, deg.block_weights[b]));
            }
        }
    }

    let _ = k;
    Ok(deg)
}

/// Highest-weight block where `v` has a nonzero component.
fn top_block(deg: &WeightedDegree, v: &CVec, scale: f64) -> Option<usize> {
    for (b, monos) in deg.block_monos.iter().enumerate() {
        let mag: f64 = monos.iter().map(|&m| v[m].norm_sqr()).sum::<f64>().sqrt();
        if mag > REL_TOL * scale {
            return Some(b);
        }
    }
    None
}

/// Try to express the top block of `v` in the echelon elements of the same
/// block; returns the combination if the least-squares residual vanishes.
fn express_in_block(deg: &WeightedDegree, block: usize, v: &CVec) -> Option<Vec<(usize, Complex64)>> {
    let members: Vec<usize> = deg
        .elems
        .iter()
        .enumerate()
        .filter(|(_, e)| e.block == block)
        .map(|(j, _)| j)
        .collect();
    if members.is_empty() {
        return None;
    }
    let monos = &deg.block_monos[block];
    let mut a = CMat::zeros(monos.len(), members.len());
    for (col, &j) in members.iter().enumerate() {
        for (r, &mono) in monos.iter().enumerate() {
            a[(r, col)] = deg.elems[j].vec[mono];
        }
    }
    let rhs = CVec::from_fn(monos.len(), |r, _| v[monos[r]]);
    let rhs_norm = rhs.norm();
    let svd = a.clone().svd(true, true);
    let sol = svd.solve(&rhs, 1e-13).ok()?;
    let residual = (&a * &sol - &rhs).norm();
    if residual <= REL_TOL * rhs_norm.max(1e-300) {
        Some(members.into_iter().zip(sol.iter().copied()).collect())
    } else {
        None
    }
}

/// Reduce `v` by the echelon until its top block is not expressible;
/// returns the reduced vector and its block. Errors if `v` reduces to zero
/// (it lies in the ideal).
fn reduce_by_echelon(deg: &WeightedDegree, mut v: CVec) -> Result<(CVec, usize), RingError> {
    let init_norm = v.norm().max(1e-300);
    loop {
        let Some(block) = top_block(deg, &v, init_norm) else {
            return Err(RingError::ZeroInQuotient);
        };
        match express_in_block(deg, block, &v) {
            Some(coeffs) => {
                for (j, c) in coeffs {
                    let e = deg.elems[j].vec.clone();
                    v -= e * c;
                }
                for &mono in &deg.block_monos[block] {
                    v[mono] = Complex64::new(0.0, 0.0);
                }
            }
            None => return Ok((v, block)),
        }
    }
}

/// The weight filtration data of one degree.
#[derive(Debug, Clone)]
pub struct DegreeFiltration {
    pub degree: usize,
    /// Adapted-basis section weights, descending.
    pub basis_weights: Vec<f64>,
    /// Distinct jump values, ascending.
    pub jumps: Vec<f64>,
    /// Dimension of each graded piece, aligned with `jumps`.
    pub graded_dims: Vec<usize>,
}

/// Filtration data across degrees.
#[derive(Debug, Clone)]
pub struct RingFiltrationData {
    pub var_weights: Vec<f64>,
    pub per_degree: Vec<DegreeFiltration>,
    /// Union of jumps over degrees 1..=K, ascending.
    pub jumps: Vec<f64>,
    /// `d(s₁s₂) ≤ d(s₁) + d(s₂)` verified on sampled products.
    pub multiplicative_ok: bool,
    /// Worst violation found in the sampling (should be ≤ 1e-9).
    pub multiplicative_defect: f64,
}

/// Compute the filtration jumps, graded dimensions, and adapted-basis
/// weights for every degree up to the truncation, and verify
/// multiplicativity on sampled products.
pub fn ring_filtration(
    ring: &GradedRingPresentation,
    var_weights: &[f64],
) -> Result<RingFiltrationData, RingError> {
    let analysis = WeightedAnalysis::new(ring, var_weights)?;
    let mut per_degree = Vec::new();
    let mut all_jumps: Vec<f64> = Vec::new();
    for k in 0..=ring.truncation() {
        let adapted = analysis.adapted_basis(k);
        let basis_weights: Vec<f64> = adapted.iter().map(|&(_, w)| w).collect();
        let mut jumps: Vec<f64> = Vec::new();
        let mut dims: Vec<usize> = Vec::new();
        for &w in basis_weights.iter().rev() {
            match jumps.last() {
                Some(&lw) if (lw - w).abs() <= 1e-9 => *dims.last_mut().unwrap() += 1,
                _ => {
                    jumps.push(w);
                    dims.push(1);
                }
            }
        }
        if k >= 1 {
            all_jumps.extend(&jumps);
        }
        per_degree.push(DegreeFiltration {
            degree: k,
            basis_weights,
            jumps,
            graded_dims: dims,
        });
    }
    all_jumps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    all_jumps.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);

    // Multiplicativity on products of adapted-basis representatives.
    let mut defect = 0.0f64;
    let free_ring = ring.generators().is_empty();
    'outer: for k1 in 1..=ring.truncation() {
        for k2 in k1..=ring.truncation() {
            if k1 + k2 > ring.truncation() {
                continue;
            }
            let mut sampled = 0;
            for &(m1, w1) in analysis.adapted_basis(k1) {
                for &(m2, w2) in analysis.adapted_basis(k2) {
                    let e1 = ring.basis(k1).exponents()[m1].clone();
                    let e2 = ring.basis(k2).exponents()[m2].clone();
                    let prod: Vec<u16> = e1.iter().zip(&e2).map(|(&a, &b)| a + b).collect();
                    let poly = SparsePoly::new(vec![(prod, Complex64::new(1.0, 0.0))])
                        .expect("monomial product");
                    match analysis.section_weight(&poly) {
                        Ok(d) => {
                            let excess = d - (w1 + w2);
                            defect = defect.max(excess);
                            if free_ring {
                                defect = defect.max((d - (w1 + w2)).abs());
                            }
                        }
                        Err(RingError::ZeroInQuotient) => {}
                        Err(e) => return Err(e),
                    }
                    sampled += 1;
                    if sampled >= 200 {
                        continue 'outer;
                    }
                }
            }
        }
    }

    Ok(RingFiltrationData {
        var_weights: var_weights.to_vec(),
        per_degree,
        jumps: all_jumps,
        multiplicative_ok: defect <= 1e-9,
        multiplicative_defect: defect,
    })
}

/// Free-standing section weight, per the operation contract.
pub fn section_weight(
    ring: &GradedRingPresentation,
    var_weights: &[f64],
    s: &SparsePoly,
) -> Result<f64, RingError> {
    WeightedAnalysis::new(ring, var_weights)?.section_weight(s)
}

/// Initial ideal data per degree.
#[derive(Debug, Clone)]
pub struct InitialIdealData {
    /// Basis of `Ī_k` per degree (columns).
    pub initial_bases: Vec<CMat>,
    /// `dim Sym^k / Ī_k == dim R_k` per degree.
    pub flat: Vec<bool>,
    /// Weight-graded dimensions of the associated graded ring per degree.
    pub graded_dims: Vec<Vec<(f64, usize)>>,
}

/// Initial spaces of the full `I_k` (not generator initial forms), with
/// degreewise flatness flags.
pub fn initial_ideal(
    ring: &GradedRingPresentation,
    var_weights: &[f64],
) -> Result<InitialIdealData, RingError> {
    let analysis = WeightedAnalysis::new(ring, var_weights)?;
    let mut initial_bases = Vec::new();
    let mut flat = Vec::new();
    let mut graded_dims = Vec::new();
    for k in 0..=ring.truncation() {
        let basis = analysis.initial_basis(k);
        let sym_dim = ring.basis(k).len();
        flat.push(sym_dim - basis.ncols() == ring.rk_dim(k));
        let mut dims: Vec<(f64, usize)> = Vec::new();
        for &(_, w) in analysis.adapted_basis(k) {
            match dims.last_mut() {
                Some((lw, c)) if (*lw - w).abs() <= 1e-9 => *c += 1,
                _ => dims.push((w, 1)),
            }
        }
        graded_dims.push(dims);
        initial_bases.push(basis);
    }
    Ok(InitialIdealData {
        initial_bases,
        flat,
        graded_dims,
    })
}
