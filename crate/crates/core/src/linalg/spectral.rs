//! Spectral decomposition with eigenvalue clustering into distinct levels.

use super::LinalgError;
use crate::CMat;
use nalgebra::SymmetricEigen;
use num_complex::Complex64;

/// A Hermitian operator presented by its clustered spectral data: distinct
/// levels in decreasing order, orthonormal eigenspace bases, and the snapped
/// matrix `Σ λ_s P_s`.
#[derive(Debug, Clone)]
pub struct HermitianGenerator {
    matrix: CMat,
    spectrum: Vec<f64>,
    multiplicities: Vec<usize>,
    /// Orthonormal eigenbasis, columns grouped by level (descending).
    eigenbasis: CMat,
}

impl HermitianGenerator {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Distinct eigenvalues, strictly decreasing.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn levels(&self) -> usize {
        self.spectrum.len()
    }

    /// Orthonormal eigenbasis with columns grouped by level.
    pub fn eigenbasis(&self) -> &CMat {
        &self.eigenbasis
    }

    /// Eigenvalue attached to each eigenbasis column.
    pub fn column_eigenvalues(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dim());
        for (s, &m) in self.multiplicities.iter().enumerate() {
            out.extend(std::iter::repeat(self.spectrum[s]).take(m));
        }
        out
    }

    fn level_range(&self, s: usize) -> std::ops::Range<usize> {
        let start: usize = self.multiplicities[..s].iter().sum();
        start..start + self.multiplicities[s]
    }

    /// Orthonormal basis of the level-`s` eigenspace.
    pub fn eigenspace(&self, s: usize) -> CMat {
        let r = self.level_range(s);
        self.eigenbasis.columns(r.start, r.len()).into_owned()
    }

    /// Orthonormal basis of `⊕_{k in levels} U_k` for a contiguous level range.
    pub fn eigenspace_span(&self, levels: std::ops::Range<usize>) -> CMat {
        let start: usize = self.multiplicities[..levels.start].iter().sum();
        let len: usize = self.multiplicities[levels.clone()].iter().sum();
        self.eigenbasis.columns(start, len).into_owned()
    }

    /// Orthogonal projector onto the level-`s` eigenspace.
    pub fn projector(&self, s: usize) -> CMat {
        let b = self.eigenspace(s);
        &b * b.adjoint()
    }

    /// `e^{tΛ}` through the spectral decomposition.
    pub fn exp_t(&self, t: f64) -> CMat {
        let evals = self.column_eigenvalues();
        let d = CMat::from_fn(self.dim(), self.dim(), |i, j| {
            if i == j {
                Complex64::new((t * evals[i]).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        &self.eigenbasis * d * self.eigenbasis.adjoint()
    }

    /// Operator norm, `max |λ_s|`.
    pub fn norm(&self) -> f64 {
        self.spectrum.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
    }

    /// Assemble from snapped levels and an orthonormal eigenbasis whose
    /// columns are grouped to match `multiplicities`.
    pub fn from_parts(
        spectrum: Vec<f64>,
        multiplicities: Vec<usize>,
        eigenbasis: CMat,
    ) -> Result<Self, LinalgError> {
        let n: usize = multiplicities.iter().sum();
        if n != eigenbasis.ncols() || eigenbasis.nrows() != n {
            return Err(LinalgError::DimensionMismatch(
                "eigenbasis does not match multiplicities".into(),
            ));
        }
        let defect = (eigenbasis.adjoint() * &eigenbasis - CMat::identity(n, n)).norm();
        if defect > 1e-8 * (n as f64).sqrt() {
            return Err(LinalgError::DimensionMismatch(format!(
                "eigenbasis not orthonormal (defect {defect:.3e})"
            )));
        }
        let mut evals = Vec::with_capacity(n);
        for (s, &m) in multiplicities.iter().enumerate() {
            evals.extend(std::iter::repeat(spectrum[s]).take(m));
        }
        let d = CMat::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(evals[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let matrix = &eigenbasis * d * eigenbasis.adjoint();
        Ok(Self {
            matrix,
            spectrum,
            multiplicities,
            eigenbasis,
        })
    }
}

/// Cluster sorted-descending eigenvalues by the gap rule: two eigenvalues
/// belong to one level iff their gap is `< tol`. The rule is applied by
/// transitive closure; if a closure class ends up with diameter `>= tol`
/// the pairwise rule admits two clusterings and we refuse.
pub(crate) fn cluster_descending(values: &[f64], tol: f64) -> Result<Vec<usize>, LinalgError> {
    let mut sizes = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i - 1] - values[i]).abs() >= tol {
            let diameter = values[start] - values[i - 1];
            if diameter >= tol {
                return Err(LinalgError::AmbiguousClustering { diameter, tol });
            }
            sizes.push(i - start);
            start = i;
        }
    }
    Ok(sizes)
}

/// Spectral decomposition of a Hermitian operator with eigenvalues clustered
/// into distinct levels separated by more than `cluster_tol`.
///
/// `cluster_tol = None` uses the default `1e-6 * max(1, ‖H‖)`.
pub fn spectral_decompose(
    h: &CMat,
    cluster_tol: Option<f64>,
) -> Result<HermitianGenerator, LinalgError> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(LinalgError::DimensionMismatch(format!(
            "matrix is {}x{}",
            n,
            h.ncols()
        )));
    }
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    let scale = h.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let defect = (h - h.adjoint()).norm();
    if defect > 1e-12 * scale * (n as f64) {
        return Err(LinalgError::NotHermitian { defect });
    }
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);

    // Sort eigenpairs by decreasing eigenvalue.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut basis = CMat::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        basis.set_column(col, &eig.eigenvectors.column(i));
    }

    let tol = cluster_tol.unwrap_or_else(|| {
        let norm = sorted_vals.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
        1e-6 * norm.max(1.0)
    });
    let sizes = cluster_descending(&sorted_vals, tol)?;

    let mut spectrum = Vec::with_capacity(sizes.len());
    let mut start = 0;
    for &m in &sizes {
        let mean = sorted_vals[start..start + m].iter().sum::<f64>() / m as f64;
        spectrum.push(mean);
        start += m;
    }

    let gen = HermitianGenerator::from_parts(spectrum, sizes, basis)?;
    debug_assert!({
        let rec_err = (gen.matrix() - h).norm();
        rec_err <= 1e-10 * h.norm().max(1.0) + gen.levels() as f64 * tol * (n as f64).sqrt()
    });
    Ok(gen)
}
