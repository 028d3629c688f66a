//! File formats and report schemas for the CLI.
//!
//! Every numeric output is serialized in scientific decimal with 17
//! significant digits so doubles round-trip losslessly; readers reject
//! NaN and infinity. Reports embed the resolved configuration, and all
//! containers are order-stable, so identical runs produce byte-identical
//! bytes.

use crate::asymptotics::AsymError;
use crate::flows::{FlowError, PipelineReportData};
use crate::futaki::{FutakiError, PolytopeData, SolitonResult, TorusWeightTable};
use crate::linalg::{HermitianForm, LinalgError, OperatorPath};
use crate::reps::RepsError;
use crate::ringfilt::{
    InitialIdealData, PerturbResult, ReesData, RingError, RingFiltrationData,
};
use crate::{CMat, Tolerances};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("non-finite number in input")]
    NonFinite,
    #[error("serialization failed: {0}")]
    Serialize(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Futaki(#[from] FutakiError),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// A double serialized as decimal with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl Serialize for F17 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("refusing to serialize NaN/Inf"));
        }
        let raw = format!("{:.16e}", self.0);
        let rv = serde_json::value::RawValue::from_string(raw)
            .map_err(serde::ser::Error::custom)?;
        rv.serialize(s)
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        if !x.is_finite() {
            return Err(serde::de::Error::custom("NaN/Inf rejected"));
        }
        Ok(F17(x))
    }
}

fn f17s(xs: &[f64]) -> Vec<F17> {
    xs.iter().map(|&x| F17(x)).collect()
}

// ---------------------------------------------------------------------------
// Matrix path file
// ---------------------------------------------------------------------------

/// `{ "dim": n, "times": [...], "matrices": [[[re,im],...]...] }` with the
/// matrices row-major and an optional reference Gram (default identity).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixPathFile {
    pub dim: usize,
    pub times: Vec<F17>,
    pub matrices: Vec<Vec<(F17, F17)>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference_gram: Option<Vec<(F17, F17)>>,
}

impl MatrixPathFile {
    pub fn from_path(path: &OperatorPath) -> Self {
        let dim = path.dim();
        let matrices = path
            .operators()
            .iter()
            .map(|a| {
                let mut row_major = Vec::with_capacity(dim * dim);
                for i in 0..dim {
                    for j in 0..dim {
                        row_major.push((F17(a[(i, j)].re), F17(a[(i, j)].im)));
                    }
                }
                row_major
            })
            .collect();
        let reference = path.reference_form().gram();
        let identity = reference == &CMat::identity(dim, dim);
        let reference_gram = (!identity).then(|| {
            let mut row_major = Vec::with_capacity(dim * dim);
            for i in 0..dim {
                for j in 0..dim {
                    row_major.push((F17(reference[(i, j)].re), F17(reference[(i, j)].im)));
                }
            }
            row_major
        });
        Self {
            dim,
            times: f17s(path.times()),
            matrices,
            reference_gram,
        }
    }

    pub fn to_path(&self) -> Result<OperatorPath, IoError> {
        let n = self.dim;
        let parse_matrix = |flat: &[(F17, F17)]| -> Result<CMat, IoError> {
            if flat.len() != n * n {
                return Err(IoError::Parse(format!(
                    "matrix has {} entries, expected {}",
                    flat.len(),
                    n * n
                )));
            }
            Ok(CMat::from_fn(n, n, |i, j| {
                let (re, im) = flat[i * n + j];
                Complex64::new(re.0, im.0)
            }))
        };
        let ops = self
            .matrices
            .iter()
            .map(|m| parse_matrix(m))
            .collect::<Result<Vec<_>, _>>()?;
        let reference = match &self.reference_gram {
            Some(flat) => HermitianForm::new(parse_matrix(flat)?)?,
            None => HermitianForm::identity(n),
        };
        let times: Vec<f64> = self.times.iter().map(|t| t.0).collect();
        Ok(OperatorPath::new(times, ops, reference)?)
    }
}

// ---------------------------------------------------------------------------
// Ring file
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingGeneratorJson {
    pub monomials: Vec<Vec<u16>>,
    pub coeffs: Vec<(F17, F17)>,
}

/// `{ "vars": m, "generators": [...], "K": k, "hilbert": [...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingFile {
    pub vars: usize,
    pub generators: Vec<RingGeneratorJson>,
    #[serde(rename = "K")]
    pub trunc: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hilbert: Option<Vec<usize>>,
}

impl RingFile {
    pub fn to_presentation(&self) -> Result<crate::ringfilt::GradedRingPresentation, IoError> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for g in &self.generators {
            if g.monomials.len() != g.coeffs.len() {
                return Err(IoError::Parse(
                    "generator monomials and coeffs differ in length".into(),
                ));
            }
            let terms: Vec<(Vec<u16>, Complex64)> = g
                .monomials
                .iter()
                .zip(&g.coeffs)
                .map(|(m, &(re, im))| (m.clone(), Complex64::new(re.0, im.0)))
                .collect();
            gens.push(crate::ringfilt::SparsePoly::new(terms)?);
        }
        Ok(crate::ringfilt::GradedRingPresentation::new(
            self.vars,
            gens,
            self.trunc,
            self.hilbert.clone(),
        )?)
    }
}

// ---------------------------------------------------------------------------
// Polytope and weight table files
// ---------------------------------------------------------------------------

/// `{ "dim": n, "vertices": [["p/q", ...], ...], "kmax": k }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub kmax: usize,
}

impl PolytopeFile {
    pub fn to_polytope(&self) -> Result<PolytopeData, IoError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|s| crate::futaki::parse_rational(s))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolytopeData::new(self.dim, vertices, self.kmax)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightTableDegreeJson {
    pub k: usize,
    pub weights: Vec<Vec<i64>>,
}

/// `{ "n": dim, "rank": r, "degrees": [{ "k":, "weights": [[...]] }] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightTableFile {
    pub n: usize,
    pub rank: usize,
    pub degrees: Vec<WeightTableDegreeJson>,
}

impl WeightTableFile {
    pub fn to_table(&self) -> Result<TorusWeightTable, IoError> {
        let mut sorted = self.degrees.clone();
        sorted.sort_by_key(|d| d.k);
        for (i, d) in sorted.iter().enumerate() {
            if d.k != i + 1 {
                return Err(IoError::Parse(format!(
                    "degrees must cover 1..=kmax contiguously, found k = {}",
                    d.k
                )));
            }
        }
        let degrees: Vec<Vec<Vec<f64>>> = sorted
            .into_iter()
            .map(|d| {
                d.weights
                    .into_iter()
                    .map(|w| w.into_iter().map(|x| x as f64).collect())
                    .collect()
            })
            .collect();
        Ok(TorusWeightTable::new(self.rank, self.n, degrees)?)
    }
}

// ---------------------------------------------------------------------------
// Typed-error descriptors for reports
// ---------------------------------------------------------------------------

/// Module and variant names of a typed analysis error, recorded in the
/// report when a run fails.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub module: String,
    pub name: String,
    pub message: String,
}

pub trait TypedErrorInfo {
    fn module(&self) -> &'static str;
    fn name(&self) -> &'static str;
    fn record(&self) -> ErrorRecord
    where
        Self: std::fmt::Display,
    {
        ErrorRecord {
            module: self.module().to_string(),
            name: self.name().to_string(),
            message: self.to_string(),
        }
    }
}

impl TypedErrorInfo for LinalgError {
    fn module(&self) -> &'static str {
        "linalg"
    }
    fn name(&self) -> &'static str {
        match self {
            LinalgError::NotHermitian { .. } => "NotHermitian",
            LinalgError::AmbiguousClustering { .. } => "AmbiguousClustering",
            LinalgError::SingularInput { .. } => "SingularInput",
            LinalgError::SingularGram => "SingularGram",
            LinalgError::StepTooLarge { .. } => "StepTooLarge",
            LinalgError::ZeroVector => "ZeroVector",
            LinalgError::TimesNotIncreasing => "TimesNotIncreasing",
            LinalgError::PathNotBasedAtIdentity { .. } => "PathNotBasedAtIdentity",
            LinalgError::DimensionMismatch(_) => "DimensionMismatch",
            LinalgError::NonFinite => "NonFinite",
        }
    }
}

impl TypedErrorInfo for RepsError {
    fn module(&self) -> &'static str {
        "reps"
    }
    fn name(&self) -> &'static str {
        match self {
            RepsError::DimensionOverflow { .. } => "DimensionOverflow",
            RepsError::InvalidDescriptor(_) => "InvalidDescriptor",
            RepsError::ParseError(_) => "ParseError",
            RepsError::SingularOperator(_) => "SingularOperator",
            RepsError::DegenerateSpan { .. } => "DegenerateSpan",
            RepsError::Linalg(e) => e.name(),
        }
    }
}

impl TypedErrorInfo for AsymError {
    fn module(&self) -> &'static str {
        match self {
            AsymError::Linalg(e) => e.module(),
            AsymError::Reps(e) => e.module(),
            _ => "asymptotics",
        }
    }
    fn name(&self) -> &'static str {
        match self {
            AsymError::TooShort { .. } => "TooShort",
            AsymError::NonConvergent { .. } => "NonConvergent",
            AsymError::EstimatorDisagreement { .. } => "NonConvergent",
            AsymError::SpectrumAmbiguity { .. } => "SpectrumAmbiguity",
            AsymError::NotStabilized { .. } => "NotStabilized",
            AsymError::IntersectionDefect { .. } => "IntersectionDefect",
            AsymError::RankBorderline { .. } => "RankBorderline",
            AsymError::ZeroVector => "ZeroVector",
            AsymError::Resample(_) => "Resample",
            AsymError::Linalg(e) => e.name(),
            AsymError::Reps(e) => e.name(),
        }
    }
}

impl TypedErrorInfo for RingError {
    fn module(&self) -> &'static str {
        match self {
            RingError::Linalg(e) => e.module(),
            _ => "ringfilt",
        }
    }
    fn name(&self) -> &'static str {
        match self {
            RingError::DegreeOverflow { .. } => "DegreeOverflow",
            RingError::NotHomogeneous(..) => "NotHomogeneous",
            RingError::HilbertMismatch { .. } => "HilbertMismatch",
            RingError::ZeroInQuotient => "ZeroInQuotient",
            RingError::SingularGram => "SingularGram",
            RingError::IrrationalFiltration { .. } => "IrrationalFiltration",
            RingError::TieDetected { .. } => "TieDetected",
            RingError::PerturbationNotFound => "PerturbationNotFound",
            RingError::Dimension(_) => "Dimension",
            RingError::Linalg(e) => e.name(),
        }
    }
}

impl TypedErrorInfo for FutakiError {
    fn module(&self) -> &'static str {
        "futaki"
    }
    fn name(&self) -> &'static str {
        match self {
            FutakiError::NotFullDimensional => "NotFullDimensional",
            FutakiError::DegreeOverflow { .. } => "DegreeOverflow",
            FutakiError::TableTooShallow { .. } => "TableTooShallow",
            FutakiError::UnstableExtrapolation { .. } => "UnstableExtrapolation",
            FutakiError::NoConvergence { .. } => "NoConvergence",
            FutakiError::NonConvexHessian { .. } => "NonConvexHessian",
            FutakiError::HilbertFitFailed { .. } => "HilbertFitFailed",
            FutakiError::Invalid(_) => "Invalid",
        }
    }
}

impl TypedErrorInfo for FlowError {
    fn module(&self) -> &'static str {
        match self {
            FlowError::Linalg(e) => e.module(),
            FlowError::Asym(e) => e.module(),
            FlowError::Ring(e) => e.module(),
            FlowError::Reps(e) => e.module(),
            _ => "flows",
        }
    }
    fn name(&self) -> &'static str {
        match self {
            FlowError::ConfigInvalid(_) => "ConfigInvalid",
            FlowError::StepUnstable { .. } => "StepUnstable",
            FlowError::DegenerateMetric { .. } => "DegenerateMetric",
            FlowError::QuadratureNotConverged { .. } => "QuadratureNotConverged",
            FlowError::Linalg(e) => e.name(),
            FlowError::Asym(e) => e.name(),
            FlowError::Ring(e) => e.name(),
            FlowError::Reps(e) => e.name(),
        }
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// The resolved configuration embedded in every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub subcommand: String,
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub threads: usize,
    pub star_tol: F17,
    pub snap_tol_factor: F17,
    pub filt_tol: F17,
    pub lift_tol: F17,
    pub lambda_zero_tol: F17,
    pub tail_fraction: F17,
}

impl ResolvedConfig {
    pub fn new(
        subcommand: &str,
        args: Vec<String>,
        seed: Option<u64>,
        threads: usize,
        tol: &Tolerances,
    ) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            args,
            seed,
            threads,
            star_tol: F17(tol.star_tol),
            snap_tol_factor: F17(tol.snap_tol_factor),
            filt_tol: F17(tol.filt_tol),
            lift_tol: F17(tol.lift_tol),
            lambda_zero_tol: F17(tol.lambda_zero_tol),
            tail_fraction: F17(tol.tail_fraction),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualsJson {
    pub star: F17,
    pub gauge: F17,
    pub tail_start: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FiltrationJson {
    pub jumps: Vec<F17>,
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WeightEntryJson {
    pub vector_id: String,
    pub raw: F17,
    pub snapped: F17,
}

/// The analyze-path report schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeReport {
    pub config: ResolvedConfig,
    pub lambda_spectrum: Vec<F17>,
    pub multiplicities: Vec<usize>,
    pub residuals: ResidualsJson,
    pub case: String,
    pub filtration: FiltrationJson,
    pub weights: Vec<WeightEntryJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorRecord>,
}

/// A report that carries only the configuration and the typed error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorReport {
    pub config: ResolvedConfig,
    pub error: ErrorRecord,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeFiltrationJson {
    pub degree: usize,
    pub dim: usize,
    pub jumps: Vec<F17>,
    pub graded_dims: Vec<usize>,
    pub flat: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReesJson {
    pub underline_lambda: i64,
    pub denominator: i64,
    pub shifted_weights: Vec<String>,
    pub generator_bidegrees: Vec<(usize, i64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationJson {
    pub gamma: Vec<String>,
    pub max_deviation: F17,
    /// Degreewise initial-ideal equality is certified only up to the
    /// truncation.
    pub certified_up_to: usize,
}

/// The ring-degenerate report schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingReport {
    pub config: ResolvedConfig,
    pub num_vars: usize,
    pub truncation: usize,
    pub var_weights: Vec<F17>,
    pub per_degree: Vec<DegreeFiltrationJson>,
    pub jumps: Vec<F17>,
    pub multiplicative_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rees: Option<ReesJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub perturbation: Option<PerturbationJson>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorRecord>,
}

pub fn ring_report(
    config: ResolvedConfig,
    ring: &crate::ringfilt::GradedRingPresentation,
    filt: &RingFiltrationData,
    initial: &InitialIdealData,
    rees: Option<&ReesData>,
    perturbation: Option<&PerturbResult>,
) -> RingReport {
    RingReport {
        config,
        num_vars: ring.num_vars(),
        truncation: ring.truncation(),
        var_weights: f17s(&filt.var_weights),
        per_degree: filt
            .per_degree
            .iter()
            .map(|d| DegreeFiltrationJson {
                degree: d.degree,
                dim: ring.rk_dim(d.degree),
                jumps: f17s(&d.jumps),
                graded_dims: d.graded_dims.clone(),
                flat: initial.flat[d.degree],
            })
            .collect(),
        jumps: f17s(&filt.jumps),
        multiplicative_ok: filt.multiplicative_ok,
        rees: rees.map(|r| ReesJson {
            underline_lambda: r.underline_lambda,
            denominator: r.denominator,
            shifted_weights: r.shifted_weights.iter().map(|w| w.to_string()).collect(),
            generator_bidegrees: r.generators.iter().map(|(k, j, _)| (*k, *j)).collect(),
        }),
        perturbation: perturbation.map(|p| PerturbationJson {
            gamma: p.gamma.iter().map(|g| g.to_string()).collect(),
            max_deviation: F17(p.max_deviation),
            certified_up_to: p.certified_up_to,
        }),
        error: None,
    }
}

/// The futaki/soliton report schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FutakiReportJson {
    pub config: ResolvedConfig,
    pub rank: usize,
    pub complex_dim: usize,
    pub kmax: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fut: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit_window: Option<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fit_residual: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stability_delta: Option<F17>,
    pub fut_modified: Vec<(Vec<F17>, F17)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub soliton_vector: Option<Vec<F17>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub soliton_residual: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub newton_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n2: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratio: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorRecord>,
}

impl FutakiReportJson {
    pub fn base(config: ResolvedConfig, table: &TorusWeightTable) -> Self {
        Self {
            config,
            rank: table.rank(),
            complex_dim: table.complex_dim(),
            kmax: table.kmax(),
            fut: None,
            fit_window: None,
            fit_residual: None,
            stability_delta: None,
            fut_modified: Vec::new(),
            soliton_vector: None,
            soliton_residual: None,
            newton_iterations: None,
            n2: None,
            ratio: None,
            error: None,
        }
    }

    pub fn with_soliton(mut self, s: &SolitonResult) -> Self {
        self.soliton_vector = Some(f17s(&s.vector));
        self.soliton_residual = Some(F17(s.residual));
        self.newton_iterations = Some(s.iterations);
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct H2Json {
    pub degree: usize,
    pub sup: F17,
    pub bounded: bool,
}

/// The p1-flow report schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct P1FlowReport {
    pub config: ResolvedConfig,
    pub case: String,
    pub lambda_norm: F17,
    pub sup_s_deviation_final: F17,
    pub max_area_drift: F17,
    pub calabi_initial: F17,
    pub calabi_final: F17,
    pub section_weights: Vec<WeightEntryJson>,
    pub h2: Vec<H2Json>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorRecord>,
}

pub fn p1_flow_report(config: ResolvedConfig, data: &PipelineReportData) -> P1FlowReport {
    P1FlowReport {
        config,
        case: if data.analysis.case_ii { "II" } else { "I" }.to_string(),
        lambda_norm: F17(data.analysis.gauge.lambda.norm()),
        sup_s_deviation_final: F17(*data.run.sup_s_deviation.last().unwrap()),
        max_area_drift: F17(data.run.max_area_drift),
        calabi_initial: F17(data.calabi_initial),
        calabi_final: F17(data.calabi_final),
        section_weights: data
            .analysis
            .section_weights
            .iter()
            .enumerate()
            .map(|(j, w)| WeightEntryJson {
                vector_id: format!("z^{j}"),
                raw: F17(w.raw),
                snapped: F17(w.snapped),
            })
            .collect(),
        h2: data
            .h2
            .iter()
            .map(|(k, r)| H2Json {
                degree: *k,
                sup: F17(r.sup),
                bounded: r.bounded,
            })
            .collect(),
        error: None,
    }
}

/// CSV series of a pipeline run: `t, calabi_energy, sup|S-S̄|,
/// lambda_norm_estimate, C_2, C_3`. Prefix times without a generator
/// estimate leave the column empty.
pub fn p1_flow_csv(data: &PipelineReportData) -> String {
    let mut out = String::from("t,calabi_energy,sup_s_deviation,lambda_norm_estimate,C_2,C_3\n");
    let lambda_at = |t: f64| -> Option<f64> {
        data.lambda_norm_series
            .iter()
            .find(|(tt, _)| (*tt - t).abs() < 1e-9)
            .map(|(_, v)| *v)
    };
    let c_at = |k: usize, idx: usize| -> Option<f64> {
        data.h2
            .iter()
            .find(|(kk, _)| *kk == k)
            .and_then(|(_, r)| r.c_k.get(idx).copied())
    };
    for (idx, &t) in data.run.times.iter().enumerate() {
        let lam = lambda_at(t).map_or(String::new(), |v| format!("{:.16e}", v));
        let c2 = c_at(2, idx).map_or(String::new(), |v| format!("{:.16e}", v));
        let c3 = c_at(3, idx).map_or(String::new(), |v| format!("{:.16e}", v));
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{},{},{}\n",
            t, data.run.calabi[idx], data.run.sup_s_deviation[idx], lam, c2, c3
        ));
    }
    out
}

/// Serialize any report to its canonical byte representation.
pub fn to_json_bytes<T: Serialize>(report: &T) -> Result<Vec<u8>, IoError> {
    let mut bytes =
        serde_json::to_vec_pretty(report).map_err(|e| IoError::Serialize(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}
