//! Command-line front door for the degeneration analysis library.
//!
//! Exit codes: 0 on success, 1 when a typed analysis error was raised (the
//! error is also recorded in the report), 2 on I/O or configuration
//! problems.

use clap::{Args, Parser, Subcommand};
use degenflow::asymptotics::{filtration, weight, StandardizedPath};
use degenflow::flows::{pipeline_p1, SymmetricMetricP1, SynthPathConfig};
use degenflow::futaki::{
    futaki_limit, soliton_vector, weights_from_polytope, PolytopeData, TorusWeightTable,
};
use degenflow::io::{self, ErrorRecord, ResolvedConfig, TypedErrorInfo, F17};
use degenflow::linalg::OperatorPath;
use degenflow::reps::RepDescriptor;
use degenflow::ringfilt::{
    initial_ideal, perturb_rational, regrade, ring_filtration, GradedRingPresentation,
};
use degenflow::{bundled, CVec, Tolerances};
use num_complex::Complex64;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "degenflow",
    about = "Degeneration data of self-similar matrix flows",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ToleranceArgs {
    /// Residual bound for the self-similarity condition on the tail.
    #[arg(long)]
    star_tol: Option<f64>,
    /// Weight snapping tolerance as a fraction of the minimal spectral gap.
    #[arg(long)]
    snap_tol_factor: Option<f64>,
    /// Principal-angle bound for filtration stabilization.
    #[arg(long)]
    filt_tol: Option<f64>,
    /// Isometry residual bound for the parallel lift.
    #[arg(long)]
    lift_tol: Option<f64>,
    /// Norm threshold classifying the generator as trivial (case II).
    #[arg(long)]
    lambda_zero_tol: Option<f64>,
    /// Fraction of the path treated as the convergent tail.
    #[arg(long)]
    tail_fraction: Option<f64>,
}

impl ToleranceArgs {
    fn resolve(&self) -> Result<Tolerances, String> {
        let mut tol = Tolerances::default();
        if let Some(x) = self.star_tol {
            tol.star_tol = x;
        }
        if let Some(x) = self.snap_tol_factor {
            tol.snap_tol_factor = x;
        }
        if let Some(x) = self.filt_tol {
            tol.filt_tol = x;
        }
        if let Some(x) = self.lift_tol {
            tol.lift_tol = x;
        }
        if let Some(x) = self.lambda_zero_tol {
            tol.lambda_zero_tol = x;
        }
        if let Some(x) = self.tail_fraction {
            tol.tail_fraction = x;
        }
        for (name, v) in [
            ("star-tol", tol.star_tol),
            ("snap-tol-factor", tol.snap_tol_factor),
            ("filt-tol", tol.filt_tol),
            ("lift-tol", tol.lift_tol),
            ("lambda-zero-tol", tol.lambda_zero_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(format!("--{name} must be positive"));
            }
        }
        if !(tol.tail_fraction > 0.0 && tol.tail_fraction <= 1.0) {
            return Err("--tail-fraction must lie in (0, 1]".into());
        }
        Ok(tol)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic gauged self-similar matrix path file.
    GenPath {
        #[arg(long)]
        dim: usize,
        /// Distinct eigenvalues, comma separated, decreasing.
        #[arg(long, value_delimiter = ',')]
        spectrum: Vec<f64>,
        /// Multiplicities aligned with the spectrum, comma separated.
        #[arg(long, value_delimiter = ',')]
        mults: Vec<usize>,
        #[arg(long)]
        steps: usize,
        /// Noise amplitude a: each transition is perturbed by a·i^{-p}.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Noise decay exponent p.
        #[arg(long, default_value_t = 2.0)]
        decay: f64,
        /// Limit angle of the unitary gauge schedule.
        #[arg(long, default_value_t = 0.0)]
        gauge_angle: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Analyze a matrix path: generator, gauges, filtration, weights.
    AnalyzePath {
        /// Path file or `bundled:geodesic` / `bundled:gauged-noisy`.
        #[arg(long)]
        input: String,
        /// Representation for the reported weights (std, dual, sym:k, ext:p).
        #[arg(long, default_value = "std")]
        rep: String,
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Weight filtration, initial ideal, and Rees data of a graded ring.
    RingDegenerate {
        /// Ring file or `bundled:conic` / `bundled:twisted-cubic`.
        #[arg(long)]
        ring: String,
        /// Variable weights, comma separated.
        #[arg(long, value_delimiter = ',')]
        weights: Vec<f64>,
        /// Truncation degree for bundled rings.
        #[arg(long, default_value_t = 6)]
        trunc: usize,
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Futaki invariants of a toric polytope or weight table.
    Futaki {
        /// Polytope file or `bundled:p1` / `bundled:p2` / `bundled:bl1-p2`.
        #[arg(long)]
        polytope: Option<String>,
        /// Weight-table file (alternative to --polytope).
        #[arg(long)]
        table: Option<PathBuf>,
        /// kmax override for bundled polytopes.
        #[arg(long, default_value_t = 24)]
        kmax: usize,
        /// Direction V', comma separated.
        #[arg(long, value_delimiter = ',')]
        vprime: Vec<f64>,
        /// Twist V (defaults to zero).
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<f64>>,
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Soliton vector of a toric weight table by Newton iteration.
    Soliton {
        #[arg(long)]
        polytope: Option<String>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 24)]
        kmax: usize,
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Kähler-Ricci flow on ℙ¹ feeding the Gram pipeline.
    P1Flow {
        /// Quartic perturbation amplitude of the round metric.
        #[arg(long, default_value_t = 0.1)]
        perturb: f64,
        /// Final time (integer number of unit times).
        #[arg(long, default_value_t = 50.0)]
        t_end: f64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// Ring truncation degree.
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = match resolve_threads() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(cli.command, threads) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Typed(record)) => {
            eprintln!("analysis error [{}::{}]: {}", record.module, record.name, record.message);
            ExitCode::from(1)
        }
    }
}

enum RunError {
    /// Bad flags or malformed input: exit 2.
    Config(String),
    /// Filesystem failures: exit 2.
    Io(String),
    /// A typed analysis error, already recorded in the report: exit 1.
    Typed(ErrorRecord),
}

fn resolve_threads() -> Result<usize, String> {
    match std::env::var("DEGENFLOW_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("DEGENFLOW_THREADS must be a positive integer, got `{v}`"))?;
            if n == 0 {
                return Err("DEGENFLOW_THREADS must be at least 1".into());
            }
            Ok(n)
        }
        Err(_) => Ok(1),
    }
}

fn write_bytes(path: &PathBuf, bytes: &[u8]) -> Result<(), RunError> {
    std::fs::write(path, bytes)
        .map_err(|e| RunError::Io(format!("cannot write {}: {e}", path.display())))
}

fn write_report<T: serde::Serialize>(path: &PathBuf, report: &T) -> Result<(), RunError> {
    let bytes = io::to_json_bytes(report).map_err(|e| RunError::Io(e.to_string()))?;
    write_bytes(path, &bytes)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Io(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| RunError::Config(format!("cannot parse {path}: {e}")))
}

fn load_path_input(input: &str) -> Result<OperatorPath, RunError> {
    match input {
        "bundled:geodesic" => bundled::geodesic_path()
            .map_err(|e| RunError::Config(format!("bundled geodesic: {e}"))),
        "bundled:gauged-noisy" => bundled::gauged_noisy_path(17)
            .map(|(p, _)| p)
            .map_err(|e| RunError::Config(format!("bundled gauged-noisy: {e}"))),
        file => {
            let parsed: io::MatrixPathFile = read_json(file)?;
            parsed
                .to_path()
                .map_err(|e| RunError::Config(format!("invalid path file: {e}")))
        }
    }
}

fn load_ring_input(input: &str, trunc: usize) -> Result<GradedRingPresentation, RunError> {
    match input {
        "bundled:conic" => {
            bundled::conic_ring(trunc).map_err(|e| RunError::Config(e.to_string()))
        }
        "bundled:twisted-cubic" => {
            bundled::twisted_cubic_ring(trunc.min(4)).map_err(|e| RunError::Config(e.to_string()))
        }
        file => {
            let parsed: io::RingFile = read_json(file)?;
            parsed
                .to_presentation()
                .map_err(|e| RunError::Config(format!("invalid ring file: {e}")))
        }
    }
}

fn load_polytope(input: &str, kmax: usize) -> Result<PolytopeData, RunError> {
    let build = |r: Result<PolytopeData, degenflow::futaki::FutakiError>| {
        r.map_err(|e| RunError::Config(e.to_string()))
    };
    match input {
        "bundled:p1" => build(bundled::p1_polytope(kmax)),
        "bundled:p2" => build(bundled::p2_polytope(kmax)),
        "bundled:bl1-p2" => build(bundled::bl1_p2_polytope(kmax)),
        file => {
            let parsed: io::PolytopeFile = read_json(file)?;
            parsed
                .to_polytope()
                .map_err(|e| RunError::Config(format!("invalid polytope file: {e}")))
        }
    }
}

fn load_table(
    polytope: &Option<String>,
    table: &Option<PathBuf>,
    kmax: usize,
) -> Result<TorusWeightTable, RunError> {
    match (polytope, table) {
        (Some(p), None) => {
            let poly = load_polytope(p, kmax)?;
            weights_from_polytope(&poly).map_err(|e| RunError::Config(e.to_string()))
        }
        (None, Some(t)) => {
            let parsed: io::WeightTableFile = read_json(&t.display().to_string())?;
            parsed
                .to_table()
                .map_err(|e| RunError::Config(format!("invalid weight table: {e}")))
        }
        _ => Err(RunError::Config(
            "provide exactly one of --polytope or --table".into(),
        )),
    }
}

fn run(cmd: Command, threads: usize) -> Result<(), RunError> {
    match cmd {
        Command::GenPath {
            dim,
            spectrum,
            mults,
            steps,
            noise,
            decay,
            gauge_angle,
            seed,
            out,
        } => {
            let cfg = SynthPathConfig {
                dim,
                spectrum,
                multiplicities: mults,
                steps,
                gauge_angle,
                noise_amplitude: noise,
                noise_decay: decay,
                rotate_frame: gauge_angle != 0.0,
                seed,
            };
            let (path, _) =
                degenflow::flows::synth_path(&cfg).map_err(|e| RunError::Config(e.to_string()))?;
            let file = io::MatrixPathFile::from_path(&path);
            let bytes = io::to_json_bytes(&file).map_err(|e| RunError::Io(e.to_string()))?;
            write_bytes(&out, &bytes)
        }

        Command::AnalyzePath {
            input,
            rep,
            report,
            seed,
            tol,
        } => {
            let tolerances = tol.resolve().map_err(RunError::Config)?;
            let config = ResolvedConfig::new(
                "analyze-path",
                vec![format!("--input={input}"), format!("--rep={rep}")],
                Some(seed),
                threads,
                &tolerances,
            );
            let desc = RepDescriptor::parse(&rep)
                .map_err(|e| RunError::Config(format!("invalid --rep: {e}")))?;
            let path = load_path_input(&input)?;
            let result = analyze_path_run(&path, &desc, &tolerances);
            match result {
                Ok((analysis_gauge, filt, weights)) => {
                    let report_data = io::AnalyzeReport {
                        config,
                        lambda_spectrum: analysis_gauge
                            .lambda
                            .spectrum()
                            .iter()
                            .map(|&x| F17(x))
                            .collect(),
                        multiplicities: analysis_gauge.lambda.multiplicities().to_vec(),
                        residuals: io::ResidualsJson {
                            star: F17(analysis_gauge.residual_star),
                            gauge: F17(analysis_gauge.residual_gauge),
                            tail_start: analysis_gauge.tail_start,
                        },
                        case: if analysis_gauge.case_ii { "II" } else { "I" }.to_string(),
                        filtration: io::FiltrationJson {
                            jumps: filt.jumps.iter().map(|&x| F17(x)).collect(),
                            dims: filt.dims.clone(),
                        },
                        weights,
                        error: None,
                    };
                    write_report(&report, &report_data)
                }
                Err(record) => {
                    write_report(&report, &io::ErrorReport {
                        config,
                        error: record.clone(),
                    })?;
                    Err(RunError::Typed(record))
                }
            }
        }

        Command::RingDegenerate {
            ring,
            weights,
            trunc,
            report,
            tol,
        } => {
            let tolerances = tol.resolve().map_err(RunError::Config)?;
            let config = ResolvedConfig::new(
                "ring-degenerate",
                vec![
                    format!("--ring={ring}"),
                    format!(
                        "--weights={}",
                        weights
                            .iter()
                            .map(|w| w.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                    format!("--trunc={trunc}"),
                ],
                None,
                threads,
                &tolerances,
            );
            let presentation = load_ring_input(&ring, trunc)?;
            match ring_degenerate_run(&presentation, &weights) {
                Ok((filt, initial, rees, perturb)) => {
                    let report_data = io::ring_report(
                        config,
                        &presentation,
                        &filt,
                        &initial,
                        rees.as_ref(),
                        perturb.as_ref(),
                    );
                    write_report(&report, &report_data)
                }
                Err(record) => {
                    write_report(&report, &io::ErrorReport {
                        config,
                        error: record.clone(),
                    })?;
                    Err(RunError::Typed(record))
                }
            }
        }

        Command::Futaki {
            polytope,
            table,
            kmax,
            vprime,
            v,
            report,
            tol,
        } => {
            let tolerances = tol.resolve().map_err(RunError::Config)?;
            let config = ResolvedConfig::new(
                "futaki",
                vec![
                    format!("--polytope={}", polytope.clone().unwrap_or_default()),
                    format!("--kmax={kmax}"),
                    format!(
                        "--vprime={}",
                        vprime
                            .iter()
                            .map(|w| w.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    ),
                ],
                None,
                threads,
                &tolerances,
            );
            let wt = load_table(&polytope, &table, kmax)?;
            let v = v.unwrap_or_else(|| vec![0.0; wt.rank()]);
            let mut report_data = io::FutakiReportJson::base(config.clone(), &wt);
            match futaki_limit(&wt, &v, &vprime) {
                Ok(value) => {
                    report_data.fut = Some(F17(value.value));
                    report_data.fit_window = Some(value.window);
                    report_data.fit_residual = Some(F17(value.fit_residual));
                    report_data.stability_delta = Some(F17(value.stability_delta));
                    report_data.fut_modified =
                        vec![(vprime.iter().map(|&x| F17(x)).collect(), F17(value.value))];
                    write_report(&report, &report_data)
                }
                Err(e) => {
                    let record = e.record();
                    report_data.error = Some(record.clone());
                    write_report(&report, &report_data)?;
                    Err(RunError::Typed(record))
                }
            }
        }

        Command::Soliton {
            polytope,
            table,
            kmax,
            report,
            tol,
        } => {
            let tolerances = tol.resolve().map_err(RunError::Config)?;
            let config = ResolvedConfig::new(
                "soliton",
                vec![
                    format!("--polytope={}", polytope.clone().unwrap_or_default()),
                    format!("--kmax={kmax}"),
                ],
                None,
                threads,
                &tolerances,
            );
            let wt = load_table(&polytope, &table, kmax)?;
            let mut report_data = io::FutakiReportJson::base(config, &wt);
            match soliton_vector(&wt) {
                Ok(result) => {
                    report_data = report_data.with_soliton(&result);
                    write_report(&report, &report_data)
                }
                Err(e) => {
                    let record = e.record();
                    report_data.error = Some(record.clone());
                    write_report(&report, &report_data)?;
                    Err(RunError::Typed(record))
                }
            }
        }

        Command::P1Flow {
            perturb,
            t_end,
            r,
            k,
            report,
            csv,
            tol,
        } => {
            let tolerances = tol.resolve().map_err(RunError::Config)?;
            if r == 0 || r > 4 {
                return Err(RunError::Config("--r must lie in 1..=4".into()));
            }
            let config = ResolvedConfig::new(
                "p1-flow",
                vec![
                    format!("--perturb={perturb}"),
                    format!("--t-end={t_end}"),
                    format!("--r={r}"),
                    format!("--k={k}"),
                ],
                None,
                threads,
                &tolerances,
            );
            let initial = SymmetricMetricP1::quartic_perturbed(perturb)
                .map_err(|e| RunError::Config(e.to_string()))?;
            match pipeline_p1(&initial, t_end, r, k, &tolerances) {
                Ok(data) => {
                    let report_data = io::p1_flow_report(config, &data);
                    write_report(&report, &report_data)?;
                    if let Some(csv_path) = csv {
                        write_bytes(&csv_path, io::p1_flow_csv(&data).as_bytes())?;
                    }
                    Ok(())
                }
                Err(e) => {
                    let record = e.record();
                    write_report(&report, &io::ErrorReport {
                        config,
                        error: record.clone(),
                    })?;
                    Err(RunError::Typed(record))
                }
            }
        }
    }
}

type AnalyzeOk = (
    degenflow::asymptotics::GaugeEstimate,
    degenflow::asymptotics::WeightFiltration,
    Vec<io::WeightEntryJson>,
);

fn analyze_path_run(
    path: &OperatorPath,
    desc: &RepDescriptor,
    tol: &Tolerances,
) -> Result<AnalyzeOk, ErrorRecord> {
    let standardized = StandardizedPath::from_path(path).map_err(|e| e.record())?;
    let gauge =
        degenflow::asymptotics::estimate_gauge(&standardized, tol).map_err(|e| e.record())?;
    let filt = filtration(&standardized, &gauge, tol).map_err(|e| e.record())?;
    let dim = path.dim();
    let dim_v = desc
        .dim(dim)
        .ok_or_else(|| degenflow::reps::RepsError::DimensionOverflow {
            dim: usize::MAX,
            cap: tol.dim_cap,
        }.record())?;
    let mut weights = Vec::with_capacity(dim_v);
    for j in 0..dim_v {
        let mut v = CVec::zeros(dim_v);
        v[j] = Complex64::new(1.0, 0.0);
        // Probe the canonical basis of the representation; for the
        // standard representation transport reference-basis vectors.
        let probe = if matches!(desc, RepDescriptor::Standard) {
            standardized.to_standard() * v
        } else {
            v
        };
        match weight(&standardized, &gauge, &probe, desc, tol) {
            Ok(est) => weights.push(io::WeightEntryJson {
                vector_id: format!("e{j}"),
                raw: F17(est.raw),
                snapped: F17(est.snapped),
            }),
            Err(e) => return Err(e.record()),
        }
    }
    Ok((gauge, filt, weights))
}

type RingOk = (
    degenflow::ringfilt::RingFiltrationData,
    degenflow::ringfilt::InitialIdealData,
    Option<degenflow::ringfilt::ReesData>,
    Option<degenflow::ringfilt::PerturbResult>,
);

fn ring_degenerate_run(
    ring: &GradedRingPresentation,
    weights: &[f64],
) -> Result<RingOk, ErrorRecord> {
    let filt = ring_filtration(ring, weights).map_err(|e| e.record())?;
    let initial = initial_ideal(ring, weights).map_err(|e| e.record())?;
    // The regrade and the rational perturbation are best-effort extras: an
    // irrational filtration or a tied generator leaves them absent rather
    // than failing the run.
    let rees = regrade(&filt, ring).ok();
    let perturb = perturb_rational(ring, weights).ok();
    Ok((filt, initial, rees, perturb))
}
