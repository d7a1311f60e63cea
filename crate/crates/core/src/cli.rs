//! Command-line surface: JSON problem files in, JSON reports out, exit codes
//! 0 (feasible / true / agreement), 1 (infeasible / false / counterexample),
//! 2 (unknown), 64 (usage or parse error). `reproduce` runs the built-in
//! reference suite end to end.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::feasibility::{
    check_certificate, Certificate, FeasibilityOutcome, SolveStats, SolverConfig, Status,
};
use crate::instances;
use crate::linalg::{min_eigenvalue, HermitianMatrix};
use crate::opsys::{
    coproduct, embed_quotient, project_quotient, quotient_equal, quotient_positive,
    OperatorSubsystem, QuotientElement, QuotientSystem,
};
use crate::riesz::{
    ambient_interpolate, cross_check_theorem, random_instance, subsystem_interpolate,
    tr_property_check, ConsistencyVerdict, InterpolationInstance, TrReport,
};
use crate::tensor::{max_positive, min_positive, min_positive_spatial, TensorElement};

pub const SCHEMA_VERSION: &str = "1";

// ---------------------------------------------------------------------------
// JSON schema
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberJson {
    Rational { num: i64, den: i64 },
    Float(f64),
}

impl NumberJson {
    fn to_f64(&self) -> f64 {
        match self {
            NumberJson::Rational { num, den } => {
                let r = BigRational::new((*num).into(), (*den).into());
                crate::feasibility::exact::rational_to_f64(&r)
            }
            NumberJson::Float(x) => *x,
        }
    }
}

/// Matrix payload: dense row-major re/im arrays, or a diagonal whose entries
/// may be exact rationals.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixJson {
    Diag { diag: Vec<NumberJson> },
    Dense { dim: usize, re: Vec<f64>, #[serde(default)] im: Option<Vec<f64>> },
}

impl MatrixJson {
    pub fn to_matrix(&self) -> crate::Result<HermitianMatrix> {
        match self {
            MatrixJson::Diag { diag } => {
                let entries: Vec<f64> = diag.iter().map(NumberJson::to_f64).collect();
                Ok(HermitianMatrix::from_diag(&entries))
            }
            MatrixJson::Dense { dim, re, im } => {
                let zeros = vec![0.0; dim * dim];
                let im = im.as_deref().unwrap_or(&zeros);
                HermitianMatrix::from_parts(re, im, *dim)
            }
        }
    }

    pub fn from_matrix(m: &HermitianMatrix) -> Self {
        if m.is_diagonal() {
            return MatrixJson::Diag {
                diag: m.diagonal().into_iter().map(NumberJson::Float).collect(),
            };
        }
        let d = m.dim();
        let mut re = Vec::with_capacity(d * d);
        let mut im = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let z = m.entry(i, j);
                re.push(z.re);
                im.push(z.im);
            }
        }
        MatrixJson::Dense { dim: d, re, im: Some(im) }
    }
}

/// System payload: an explicit basis or one of the canonical algebras.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemJson {
    Full { full: usize },
    Diagonal { diagonal: usize },
    BlockDiagonal { block_diagonal: Vec<usize> },
    Basis { basis: Vec<MatrixJson> },
}

impl SystemJson {
    pub fn to_system(&self) -> crate::Result<OperatorSubsystem> {
        match self {
            SystemJson::Full { full } => Ok(OperatorSubsystem::full_matrix_algebra(*full)),
            SystemJson::Diagonal { diagonal } => {
                Ok(OperatorSubsystem::full_diagonal_algebra(*diagonal))
            }
            SystemJson::BlockDiagonal { block_diagonal } => {
                Ok(OperatorSubsystem::block_diagonal_algebra(block_diagonal))
            }
            SystemJson::Basis { basis } => {
                let mats = basis
                    .iter()
                    .map(MatrixJson::to_matrix)
                    .collect::<crate::Result<Vec<_>>>()?;
                OperatorSubsystem::new(mats)
            }
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct ProblemFile {
    pub schema_version: String,
    pub kind: String,
    pub payload: serde_json::Value,
}

#[derive(Debug, Deserialize)]
struct TensorPayload {
    system: SystemJson,
    k: usize,
    m: usize,
    #[serde(default = "default_level")]
    level: usize,
    coeffs: Vec<MatrixJson>,
    #[serde(default)]
    strict: bool,
}

#[derive(Debug, Deserialize)]
struct SpatialPayload {
    s1: SystemJson,
    s2: SystemJson,
    terms: Vec<SpatialTerm>,
}

#[derive(Debug, Deserialize)]
struct SpatialTerm {
    x: MatrixJson,
    y: MatrixJson,
}

#[derive(Debug, Deserialize)]
struct QuotientPayload {
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    m: Option<usize>,
    #[serde(default)]
    weights: Option<Vec<f64>>,
    #[serde(default = "default_level")]
    level: usize,
    blocks: Vec<MatrixJson>,
    #[serde(default)]
    margin: f64,
}

#[derive(Debug, Deserialize)]
struct InterpolatePayload {
    system: SystemJson,
    #[serde(default = "default_level")]
    level: usize,
    lower: Vec<MatrixJson>,
    upper: Vec<MatrixJson>,
    /// "ambient" (default) or "subsystem"
    #[serde(default)]
    scope: Option<String>,
}

#[derive(Debug, Deserialize)]
struct TrCheckPayload {
    system: SystemJson,
    k: usize,
    m: usize,
    #[serde(default = "default_level")]
    level: usize,
    #[serde(default = "default_trials")]
    trials: usize,
}

fn default_level() -> usize {
    1
}

fn default_trials() -> usize {
    25
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub delta: f64,
    pub tol_feas: f64,
    pub tol_cert: f64,
    pub tol_bisect: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub level: usize,
}

#[derive(Debug, Serialize)]
pub struct ResidualEcho {
    pub iterations: usize,
    pub primal: f64,
    pub dual: f64,
    pub max_violation: f64,
    pub exact: bool,
}

impl ResidualEcho {
    fn from_stats(stats: &SolveStats) -> Self {
        Self {
            iterations: stats.iterations,
            primal: stats.primal_residual,
            dual: stats.dual_residual,
            max_violation: stats.max_violation,
            exact: stats.exact,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub kind: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<MatrixJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residuals: Option<ResidualEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
    pub timing_ms: u128,
    pub config: ConfigEcho,
}

fn status_name(status: Status) -> &'static str {
    match status {
        Status::Feasible => "feasible",
        Status::Infeasible => "infeasible",
        Status::Unknown => "unknown",
    }
}

fn status_exit(status: Status) -> i32 {
    match status {
        Status::Feasible => 0,
        Status::Infeasible => 1,
        Status::Unknown => 2,
    }
}

fn outcome_fields(
    outcome: &FeasibilityOutcome,
) -> (String, Option<Vec<f64>>, Option<Vec<MatrixJson>>, Option<ResidualEcho>) {
    let status = status_name(outcome.status()).to_string();
    let witness = outcome.witness().map(|w| w.to_vec());
    let certificate = outcome.certificate().map(|c| {
        c.multipliers.iter().map(MatrixJson::from_matrix).collect::<Vec<_>>()
    });
    let residuals = Some(ResidualEcho::from_stats(outcome.stats()));
    (status, witness, certificate, residuals)
}

fn tr_report_json(report: &TrReport) -> serde_json::Value {
    serde_json::json!({
        "k": report.k,
        "m": report.m,
        "level": report.level,
        "trials": report.trials,
        "seed": report.seed,
        "delta": report.delta,
        "ambient_feasible": report.ambient_feasible,
        "subsystem_feasible": report.subsystem_feasible,
        "subsystem_infeasible": report.subsystem_infeasible,
        "unknown": report.unknown,
        "first_counterexample": report.first_counterexample,
        "records": report.records.iter().map(|r| serde_json::json!({
            "seed": r.seed,
            "injected": r.injected,
            "ambient": status_name(r.ambient),
            "subsystem": r.subsystem.map(status_name),
        })).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser, Debug)]
#[command(name = "oscone", version, about = "Tensor-cone positivity and interpolation deciders")]
pub struct Cli {
    #[command(subcommand)]
    command: CommandKind,
    /// Strictness margin substituted for strict inequalities.
    #[arg(long, global = true, default_value_t = 1e-6)]
    delta: f64,
    /// Overrides both the feasibility and certificate tolerances.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Overrides the matrix level given in the input file.
    #[arg(long, global = true)]
    level: Option<usize>,
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Emit compact JSON (the default; kept for symmetry).
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum CommandKind {
    /// Maximal tensor-cone positivity of a coefficient element.
    MaxPos {
        #[arg(long)]
        input: PathBuf,
    },
    /// Minimal tensor-cone positivity (ambient witness scope).
    MinPos {
        #[arg(long)]
        input: PathBuf,
    },
    /// Spatial minimal-tensor positivity of a sum of elementary tensors.
    SpatialMin {
        #[arg(long)]
        input: PathBuf,
    },
    /// Positivity of a coset in a coordinate quotient.
    QuotientPos {
        #[arg(long)]
        input: PathBuf,
    },
    /// Tight interpolation between matrix bounds.
    Interpolate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Seeded interpolation sampling over a subsystem.
    TrCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Interpolation vs tensor positivity consistency on one instance.
    CrossCheck {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run the built-in reference suite.
    Reproduce,
}

pub fn solver_config(delta: f64, tol: Option<f64>, max_iters: Option<usize>) -> SolverConfig {
    let mut config = SolverConfig::default();
    config.delta_strict = delta;
    if let Some(t) = tol {
        config.tol_feas = t;
        config.tol_cert = t;
    }
    if let Some(n) = max_iters {
        config.max_iters = n;
    }
    config
}

/// Entry point shared by the binary and the integration tests.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders --help/--version through the error path too
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                eprint!("{e}");
                return 0;
            }
            eprintln!("{e}");
            return 64;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            64
        }
    }
}

/// Options shared by the CLI flags and the C API.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub delta: f64,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub seed: u64,
    pub level: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { delta: 1e-6, tol: None, max_iters: None, seed: 0, level: None }
    }
}

fn execute(cli: Cli) -> crate::Result<i32> {
    let options = RunOptions {
        delta: cli.delta,
        tol: cli.tol,
        max_iters: cli.max_iters,
        seed: cli.seed,
        level: cli.level,
    };
    if matches!(cli.command, CommandKind::Reproduce) {
        let (value, all_pass) = reference_suite(&options, true);
        print_value(&value, cli.pretty);
        return Ok(if all_pass { 0 } else { 1 });
    }
    let (kind, input) = match &cli.command {
        CommandKind::MaxPos { input } => ("max-pos", input),
        CommandKind::MinPos { input } => ("min-pos", input),
        CommandKind::SpatialMin { input } => ("spatial-min", input),
        CommandKind::QuotientPos { input } => ("quotient-pos", input),
        CommandKind::Interpolate { input } => ("interpolate", input),
        CommandKind::TrCheck { input } => ("tr-check", input),
        CommandKind::CrossCheck { input } => ("cross-check", input),
        CommandKind::Reproduce => unreachable!(),
    };
    let text = std::fs::read_to_string(input)
        .map_err(|e| crate::Error::InvalidInput(format!("cannot read {}: {e}", input.display())))?;
    let file: ProblemFile = serde_json::from_str(&text)
        .map_err(|e| crate::Error::InvalidInput(format!("malformed problem file: {e}")))?;
    if file.kind != kind {
        return Err(crate::Error::InvalidInput(format!(
            "problem file kind {:?} does not match subcommand {kind:?}",
            file.kind
        )));
    }
    let (report, exit) = dispatch(&file, &options)?;
    print_report(&report, cli.pretty);
    Ok(exit)
}

/// Runs one parsed problem and returns the report plus the decision exit
/// code (0 feasible/true/agree, 1 infeasible/false/counterexample, 2
/// unknown).
pub fn dispatch(file: &ProblemFile, options: &RunOptions) -> crate::Result<(Report, i32)> {
    if file.schema_version != SCHEMA_VERSION {
        return Err(crate::Error::InvalidInput(format!(
            "unsupported schema_version {:?}",
            file.schema_version
        )));
    }
    let config = solver_config(options.delta, options.tol, options.max_iters);
    let started = Instant::now();
    let kind = file.kind.as_str();
    let payload = file.payload.clone();

    let (status, witness, certificate, residuals, detail, exit) = match kind {
        "max-pos" | "min-pos" => {
            let p: TensorPayload = parse_payload(payload)?;
            let system = p.system.to_system()?;
            let level = options.level.unwrap_or(p.level);
            let quotient = QuotientSystem::standard(p.k, p.m)?;
            let coeffs = p
                .coeffs
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<crate::Result<Vec<_>>>()?;
            let u = TensorElement::new(system, quotient, level, coeffs)?;
            let outcome = if kind == "max-pos" {
                max_positive(&u, p.strict, &config)?
            } else {
                min_positive(&u, p.strict, &config)?
            };
            let exit = status_exit(outcome.status());
            let (s, w, c, r) = outcome_fields(&outcome);
            (s, w, c, r, None, exit)
        }
        "spatial-min" => {
            let p: SpatialPayload = parse_payload(payload)?;
            let s1 = p.s1.to_system()?;
            let s2 = p.s2.to_system()?;
            let terms = p
                .terms
                .iter()
                .map(|t| Ok((t.x.to_matrix()?, t.y.to_matrix()?)))
                .collect::<crate::Result<Vec<_>>>()?;
            let positive = min_positive_spatial(&s1, &s2, &terms, &config)?;
            let status = if positive { "positive" } else { "not-positive" };
            (status.to_string(), None, None, None, None, if positive { 0 } else { 1 })
        }
        "quotient-pos" => {
            let p: QuotientPayload = parse_payload(payload)?;
            let quotient = match (&p.weights, p.k, p.m) {
                (Some(w), _, _) => QuotientSystem::general(w.clone())?,
                (None, Some(k), Some(m)) => QuotientSystem::standard(k, m)?,
                _ => {
                    return Err(crate::Error::InvalidInput(
                        "quotient-pos needs weights or k and m".into(),
                    ))
                }
            };
            let level = options.level.unwrap_or(p.level);
            let blocks = p
                .blocks
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<crate::Result<Vec<_>>>()?;
            let e = QuotientElement::new(quotient, level, blocks)?;
            let outcome = quotient_positive(&e, p.margin, &config)?;
            let exit = status_exit(outcome.status());
            let (s, w, c, r) = outcome_fields(&outcome);
            (s, w, c, r, None, exit)
        }
        "interpolate" => {
            let p: InterpolatePayload = parse_payload(payload)?;
            let system = p.system.to_system()?;
            let level = options.level.unwrap_or(p.level);
            let lower = p
                .lower
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<crate::Result<Vec<_>>>()?;
            let upper = p
                .upper
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<crate::Result<Vec<_>>>()?;
            let inst = InterpolationInstance::new(system, level, lower, upper, options.delta)?;
            let scope = p.scope.as_deref().unwrap_or("ambient");
            let outcome = match scope {
                "ambient" => ambient_interpolate(&inst, &config)?,
                "subsystem" => subsystem_interpolate(&inst, &config)?,
                other => {
                    return Err(crate::Error::InvalidInput(format!(
                        "unknown scope {other:?} (expected ambient or subsystem)"
                    )))
                }
            };
            let exit = status_exit(outcome.status());
            let (s, w, c, r) = outcome_fields(&outcome);
            (s, w, c, r, None, exit)
        }
        "tr-check" => {
            let p: TrCheckPayload = parse_payload(payload)?;
            let system = p.system.to_system()?;
            let level = options.level.unwrap_or(p.level);
            let report = tr_property_check(&system, p.k, p.m, level, p.trials, options.seed, &config)?;
            let counterexample = report.first_counterexample.is_some();
            let status = if counterexample { "counterexample-found" } else { "no-counterexample" };
            let detail = tr_report_json(&report);
            (
                status.to_string(),
                None,
                None,
                None,
                Some(detail),
                if counterexample { 1 } else { 0 },
            )
        }
        "cross-check" => {
            let p: InterpolatePayload = parse_payload(payload)?;
            let system = p.system.to_system()?;
            let level = options.level.unwrap_or(p.level);
            let lower = p
                .lower
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<crate::Result<Vec<_>>>()?;
            let upper = p
                .upper
                .iter()
                .map(MatrixJson::to_matrix)
                .collect::<crate::Result<Vec<_>>>()?;
            let inst = InterpolationInstance::new(system, level, lower, upper, options.delta)?;
            match cross_check_theorem(&inst, &config)? {
                ConsistencyVerdict::Agree(status) => {
                    let detail = serde_json::json!({ "shared_status": status_name(status) });
                    ("agree".to_string(), None, None, None, Some(detail), 0)
                }
                ConsistencyVerdict::Disagree { interpolation, tensor } => {
                    let detail = serde_json::json!({
                        "interpolation": status_name(interpolation),
                        "tensor": status_name(tensor),
                    });
                    ("disagree".to_string(), None, None, None, Some(detail), 1)
                }
            }
        }
        other => {
            return Err(crate::Error::InvalidInput(format!(
                "unknown problem kind {other:?}"
            )))
        }
    };

    let report = Report {
        schema_version: SCHEMA_VERSION,
        kind: kind.to_string(),
        status,
        witness,
        certificate,
        residuals,
        detail,
        timing_ms: started.elapsed().as_millis(),
        config: ConfigEcho {
            delta: options.delta,
            tol_feas: config.tol_feas,
            tol_cert: config.tol_cert,
            tol_bisect: config.tol_bisect,
            max_iters: config.max_iters,
            seed: options.seed,
            level: options.level.unwrap_or(1),
        },
    };
    Ok((report, exit))
}

fn parse_payload<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> crate::Result<T> {
    serde_json::from_value(value)
        .map_err(|e| crate::Error::InvalidInput(format!("malformed payload: {e}")))
}

fn print_report(report: &Report, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(report)
    } else {
        serde_json::to_string(report)
    }
    .expect("report serialization");
    println!("{text}");
}

fn print_value(value: &serde_json::Value, pretty: bool) {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("suite serialization");
    println!("{text}");
}

// ---------------------------------------------------------------------------
// Reproduce suite
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize)]
struct SuiteItem {
    item: String,
    pass: bool,
    detail: String,
    timing_ms: u128,
}

/// Runs the built-in reference suite and returns its JSON report plus the
/// aggregate outcome. Per-item progress lines go to stderr when requested.
pub fn reference_suite(options: &RunOptions, print_lines: bool) -> (serde_json::Value, bool) {
    let config = solver_config(options.delta, options.tol, options.max_iters);
    let started = Instant::now();
    let mut items: Vec<SuiteItem> = Vec::new();
    let mut run_item = |name: &str, body: &dyn Fn() -> crate::Result<(bool, String)>| {
        let t0 = Instant::now();
        let (pass, detail) = match body() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        if print_lines {
            eprintln!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        }
        items.push(SuiteItem {
            item: name.to_string(),
            pass,
            detail,
            timing_ms: t0.elapsed().as_millis(),
        });
    };

    let delta = options.delta;
    let seed = options.seed;
    let config = &config;

    run_item("lattice-interpolation-failure", &|| {
        lattice_failure_item(config, delta)
    });
    run_item("tensor-cone-separation", &|| separation_item(config, delta));
    run_item("quotient-identities", &|| quotient_identities_item(config));
    run_item("coproduct-and-embedding", &|| coproduct_item(config, seed));
    run_item("tight-interpolation-sampling", &|| tr_item(config, seed));
    run_item("interpolation-tensor-agreement", &|| {
        cross_check_item(config, delta, seed)
    });

    let all_pass = items.iter().all(|i| i.pass);
    let report = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "kind": "reproduce",
        "status": if all_pass { "pass" } else { "fail" },
        "items": items,
        "timing_ms": started.elapsed().as_millis(),
        "config": {
            "delta": delta,
            "tol_feas": config.tol_feas,
            "tol_cert": config.tol_cert,
            "tol_bisect": config.tol_bisect,
            "max_iters": config.max_iters,
            "seed": seed,
            "level": options.level.unwrap_or(1),
        },
    });
    (report, all_pass)
}

fn lattice_failure_item(config: &SolverConfig, delta: f64) -> crate::Result<(bool, String)> {
    let [a, b, c, d] = instances::lattice_failure_m2();
    // Premise: all four gaps strictly positive.
    let mut premise_margin = f64::INFINITY;
    for (lo, hi) in [(&a, &c), (&b, &c), (&a, &d), (&b, &d)] {
        premise_margin = premise_margin.min(min_eigenvalue(&hi.sub(lo)?)?);
    }
    if premise_margin <= 0.0 {
        return Ok((false, format!("premise failed: min gap {premise_margin:.3e}")));
    }
    let m2 = OperatorSubsystem::full_matrix_algebra(2);
    let inst = InterpolationInstance::new(m2, 1, vec![a, b], vec![c, d], delta)?;
    let outcome = ambient_interpolate(&inst, config)?;
    let Some(cert) = outcome.certificate() else {
        return Ok((false, format!("expected infeasible, got {}", outcome.status())));
    };
    let verified = verify_interpolation_certificate(&inst, cert, config)?;
    Ok((
        verified,
        format!(
            "no interpolant in M2 (premise margin {premise_margin:.4}, certificate verified: {verified})"
        ),
    ))
}

/// Re-verifies an interpolation certificate against the block system the
/// decider solved.
fn verify_interpolation_certificate(
    inst: &InterpolationInstance,
    cert: &Certificate,
    config: &SolverConfig,
) -> crate::Result<bool> {
    use crate::feasibility::{AffineBlock, LmiProblem};
    let n = inst.level * inst.system.ambient_dim();
    let basis = HermitianMatrix::hermitian_basis(n);
    let mut blocks = Vec::new();
    for x in &inst.lower {
        blocks.push(AffineBlock::new(x.scale(-1.0), basis.clone()).with_margin(inst.delta, true));
    }
    let neg: Vec<HermitianMatrix> = basis.iter().map(|b| b.scale(-1.0)).collect();
    for y in &inst.upper {
        blocks.push(AffineBlock::new(y.clone(), neg.clone()).with_margin(inst.delta, true));
    }
    let problem = LmiProblem::new(basis.len(), blocks)?;
    check_certificate(&problem, cert, config)
}

fn separation_item(config: &SolverConfig, delta: f64) -> crate::Result<(bool, String)> {
    let system = instances::separation_system();
    let quotient = QuotientSystem::standard(2, 3)?;
    let u = TensorElement::new(system, quotient, 1, instances::separation_coefficients())?;

    let min_out = min_positive(&u, false, config)?;
    if !min_out.is_feasible() {
        return Ok((false, format!("expected min-positive, got {}", min_out.status())));
    }
    let witness = crate::tensor::decode_ambient_witness(&u, min_out.witness().unwrap())?;
    if !crate::tensor::verify_witness(&u, &witness, false, config)? {
        return Ok((false, "minimal-cone witness failed verification".into()));
    }

    let mut strict_config = config.clone();
    strict_config.delta_strict = delta;
    let max_out = max_positive(&u, true, &strict_config)?;
    if !max_out.is_infeasible() {
        return Ok((false, format!("expected max-infeasible, got {}", max_out.status())));
    }
    let exact = max_out.stats().exact && min_out.stats().exact;
    Ok((
        exact,
        format!("min-positive with diagonal witness, strictly max-infeasible (exact LP: {exact})"),
    ))
}

fn quotient_identities_item(config: &SolverConfig) -> crate::Result<(bool, String)> {
    let q = QuotientSystem::standard(2, 3)?;
    let zero_coset = q.scalar_element(&[1.0, 1.0, -1.0, -1.0, -1.0])?;
    let ok1 = quotient_equal(&zero_coset, &q.zero(1))?;
    let unit_coset = q.scalar_element(&[2.0, 2.0, 0.0, 0.0, 0.0])?;
    let ok2 = quotient_equal(&unit_coset, &q.unit(1))?;
    let neg = q.scalar_element(&[-1.0, 0.0, 0.0, 0.0, 0.0])?;
    let out = quotient_positive(&neg, 0.0, config)?;
    let ok3 = out.is_infeasible() && out.stats().exact;
    Ok((
        ok1 && ok2 && ok3,
        format!("sign-vector coset is zero: {ok1}; doubled-unit coset: {ok2}; negative-slot coset infeasible exactly: {ok3}"),
    ))
}

fn coproduct_item(config: &SolverConfig, seed: u64) -> crate::Result<(bool, String)> {
    let _ = config;
    let cp = coproduct(2, 3)?;
    let unit = cp.system.unit(1);
    let left_unital = quotient_equal(&cp.embed_left(&[1.0, 1.0])?, &unit)?;
    let right_unital = quotient_equal(&cp.embed_right(&[1.0, 1.0, 1.0])?, &unit)?;

    use rand::Rng;
    use rand::SeedableRng;
    let small = QuotientSystem::standard(2, 3)?;
    let big = QuotientSystem::standard(3, 4)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed.wrapping_add(101));
    let mut round_trips = 0usize;
    for _ in 0..20 {
        let coords: Vec<f64> = (0..5).map(|_| rng.gen_range(-4.0..4.0)).collect();
        let e = small.scalar_element(&coords)?;
        let up = embed_quotient(&small, &big, &e)?;
        let back = project_quotient(&big, &small, &up)?;
        if quotient_equal(&back, &e)? {
            round_trips += 1;
        }
    }
    let ok = left_unital && right_unital && round_trips == 20;
    Ok((
        ok,
        format!("embeddings unital: {left_unital}/{right_unital}; 20 seeded round trips exact: {round_trips}"),
    ))
}

fn tr_item(config: &SolverConfig, seed: u64) -> crate::Result<(bool, String)> {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, system) in [
        ("diagonal-of-m4", OperatorSubsystem::full_diagonal_algebra(4)),
        ("two-by-two-blocks-of-m4", OperatorSubsystem::block_diagonal_algebra(&[2, 2])),
    ] {
        for level in [1usize, 2] {
            let trials = if level == 1 { 8 } else { 4 };
            let report = tr_property_check(&system, 2, 2, level, trials, seed, config)?;
            let mut unresolved = 0usize;
            if report.unknown > 0 {
                // retry unknowns at a larger budget
                let mut retry_config = config.clone();
                retry_config.max_iters = config.max_iters * 4;
                let retry = tr_property_check(&system, 2, 2, level, trials, seed, &retry_config)?;
                unresolved = retry.unknown;
            }
            let good = report.subsystem_infeasible == 0 && unresolved == 0;
            ok &= good;
            lines.push(format!(
                "{name} r={level}: {}/{} ambient-feasible, {} subsystem-infeasible, {} unknown",
                report.ambient_feasible, trials, report.subsystem_infeasible, report.unknown
            ));
        }
    }
    Ok((ok, lines.join("; ")))
}

fn cross_check_item(config: &SolverConfig, delta: f64, seed: u64) -> crate::Result<(bool, String)> {
    let mut agreements = 0usize;
    let mut total = 0usize;
    let mut trivial_ok = false;

    // Trivial instance: zero below the unit; expected agreement on Feasible.
    {
        let c2 = OperatorSubsystem::full_diagonal_algebra(2);
        let inst = InterpolationInstance::new(
            c2,
            1,
            vec![HermitianMatrix::zeros(2)],
            vec![HermitianMatrix::identity(2)],
            delta,
        )?;
        total += 1;
        if cross_check_theorem(&inst, config)? == ConsistencyVerdict::Agree(Status::Feasible) {
            agreements += 1;
            trivial_ok = true;
        }
    }

    // The lattice-failure instance over full M2.
    {
        let [a, b, c, d] = instances::lattice_failure_m2();
        let m2 = OperatorSubsystem::full_matrix_algebra(2);
        let inst = InterpolationInstance::new(m2, 1, vec![a, b], vec![c, d], delta)?;
        total += 1;
        if matches!(cross_check_theorem(&inst, config)?, ConsistencyVerdict::Agree(_)) {
            agreements += 1;
        }
    }

    // The separation-system boundary instance.
    {
        let system = instances::separation_system();
        let (lower, upper) = instances::separation_interpolation_bounds();
        let inst = InterpolationInstance::new(system, 1, lower, upper, delta)?;
        total += 1;
        if matches!(cross_check_theorem(&inst, config)?, ConsistencyVerdict::Agree(_)) {
            agreements += 1;
        }
    }

    // Thirty seeded diagonal instances, exact on both routes.
    let c4 = OperatorSubsystem::full_diagonal_algebra(4);
    for t in 0..30u64 {
        let inst = random_instance(&c4, 2, 2, 1, seed.wrapping_add(1000 + t), delta)?;
        total += 1;
        if matches!(cross_check_theorem(&inst, config)?, ConsistencyVerdict::Agree(_)) {
            agreements += 1;
        }
    }

    let ok = agreements == total && trivial_ok;
    Ok((ok, format!("{agreements}/{total} agreements (trivial instance feasible: {trivial_ok})")))
}
