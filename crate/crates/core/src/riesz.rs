//! Relative tight Riesz interpolation: given strict lower and upper bounds
//! inside a subsystem, decide whether a separator exists in the full ambient
//! algebra and whether one exists inside the subsystem span, at any matrix
//! level. A sampling harness compares the two across seeded instances, and a
//! cross-check ties the interpolation decision to strict maximal-tensor
//! positivity of the associated element.

use num::{BigRational, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::feasibility::exact::{rational_from_f64, LinearSystem};
use crate::feasibility::{
    exact_linear_outcome, solve_feasibility, AffineBlock, FeasibilityOutcome, LmiProblem,
    SolverConfig, Status,
};
use crate::instances;
use crate::linalg::HermitianMatrix;
use crate::opsys::OperatorSubsystem;
use crate::tensor::{interpolation_element, max_positive};
use crate::opsys::QuotientSystem;

/// Strict interpolation data: find `g` with
/// `lower_i + delta <= g` and `g + delta <= upper_j` for all bounds.
#[derive(Debug, Clone)]
pub struct InterpolationInstance {
    pub system: OperatorSubsystem,
    pub level: usize,
    pub lower: Vec<HermitianMatrix>,
    pub upper: Vec<HermitianMatrix>,
    pub delta: f64,
}

impl InterpolationInstance {
    pub fn new(
        system: OperatorSubsystem,
        level: usize,
        lower: Vec<HermitianMatrix>,
        upper: Vec<HermitianMatrix>,
        delta: f64,
    ) -> Result<Self> {
        if lower.is_empty() || upper.is_empty() {
            return Err(Error::InvalidInput("need at least one bound on each side".into()));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidInput(format!("delta must be positive, got {delta}")));
        }
        for m in lower.iter().chain(upper.iter()) {
            system.contains_at_level(m, level)?;
        }
        Ok(Self { system, level, lower, upper, delta })
    }

    /// The order-swapped instance: interpolating between `-upper` and
    /// `-lower` is the same problem with the roles of the sides exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            system: self.system.clone(),
            level: self.level,
            lower: self.upper.iter().map(|m| m.scale(-1.0)).collect(),
            upper: self.lower.iter().map(|m| m.scale(-1.0)).collect(),
            delta: self.delta,
        }
    }
}

/// Separator search over the full ambient matrix algebra.
pub fn ambient_interpolate(
    inst: &InterpolationInstance,
    config: &SolverConfig,
) -> Result<FeasibilityOutcome> {
    let n = inst.level * inst.system.ambient_dim();
    let all_diagonal = inst
        .lower
        .iter()
        .chain(inst.upper.iter())
        .all(|m| m.is_diagonal());
    if all_diagonal {
        // Pinching keeps the constraints, so a diagonal separator suffices.
        let mut system = LinearSystem::new(n);
        let delta = rational_from_f64(inst.delta);
        for x in &inst.lower {
            for j in 0..n {
                let mut coeffs = vec![BigRational::zero(); n];
                coeffs[j] = BigRational::from_integer(1.into());
                system.push(-rational_from_f64(x.entry(j, j).re) - &delta, coeffs);
            }
        }
        for y in &inst.upper {
            for j in 0..n {
                let mut coeffs = vec![BigRational::zero(); n];
                coeffs[j] = BigRational::from_integer((-1).into());
                system.push(rational_from_f64(y.entry(j, j).re) - &delta, coeffs);
            }
        }
        let exact = system.solve();
        let dims = vec![n; inst.lower.len() + inst.upper.len()];
        return Ok(exact_linear_outcome(&system, &exact, &dims));
    }
    let basis = HermitianMatrix::hermitian_basis(n);
    solve_interpolation(inst, basis, config)
}

/// Separator search constrained to `M_r(span)`; the separator is merely
/// self-adjoint, no positivity is imposed on it.
pub fn subsystem_interpolate(
    inst: &InterpolationInstance,
    config: &SolverConfig,
) -> Result<FeasibilityOutcome> {
    let diagonal_path = inst.system.is_diagonal()
        && inst.level == 1
        && inst
            .lower
            .iter()
            .chain(inst.upper.iter())
            .all(|m| m.is_diagonal());
    if diagonal_path {
        let d = inst.system.ambient_dim();
        let basis = inst.system.exact_diagonals().expect("diagonal system");
        let nvars = basis.len();
        let delta = rational_from_f64(inst.delta);
        let mut system = LinearSystem::new(nvars);
        for x in &inst.lower {
            for j in 0..d {
                let coeffs: Vec<BigRational> = basis.iter().map(|b| b[j].clone()).collect();
                system.push(-rational_from_f64(x.entry(j, j).re) - &delta, coeffs);
            }
        }
        for y in &inst.upper {
            for j in 0..d {
                let coeffs: Vec<BigRational> = basis.iter().map(|b| -b[j].clone()).collect();
                system.push(rational_from_f64(y.entry(j, j).re) - &delta, coeffs);
            }
        }
        let exact = system.solve();
        let dims = vec![d; inst.lower.len() + inst.upper.len()];
        return Ok(exact_linear_outcome(&system, &exact, &dims));
    }
    let basis = inst.system.level_basis(inst.level);
    solve_interpolation(inst, basis, config)
}

fn solve_interpolation(
    inst: &InterpolationInstance,
    basis: Vec<HermitianMatrix>,
    config: &SolverConfig,
) -> Result<FeasibilityOutcome> {
    let nvars = basis.len();
    let mut blocks = Vec::with_capacity(inst.lower.len() + inst.upper.len());
    for x in &inst.lower {
        blocks.push(
            AffineBlock::new(x.scale(-1.0), basis.clone()).with_margin(inst.delta, true),
        );
    }
    let neg: Vec<HermitianMatrix> = basis.iter().map(|b| b.scale(-1.0)).collect();
    for y in &inst.upper {
        blocks.push(AffineBlock::new(y.clone(), neg.clone()).with_margin(inst.delta, true));
    }
    let problem = LmiProblem::new(nvars, blocks)?;
    solve_feasibility(&problem, config)
}

/// Decodes an interpolation witness into the separator matrix. The scope
/// must match the decider that produced the witness: subsystem witnesses are
/// coordinates in the span basis, ambient ones are diagonal entries (exact
/// path) or canonical Hermitian coordinates (numeric path).
pub fn decode_separator(
    inst: &InterpolationInstance,
    witness: &[f64],
    subsystem: bool,
) -> Result<HermitianMatrix> {
    let n = inst.level * inst.system.ambient_dim();
    if subsystem {
        if inst.level == 1 && witness.len() == inst.system.dim() {
            return inst.system.combine(witness);
        }
        let basis = inst.system.level_basis(inst.level);
        if witness.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "subsystem witness length {} matches no coordinate system",
                witness.len()
            )));
        }
        let mut acc = HermitianMatrix::zeros(n);
        for (c, b) in witness.iter().zip(basis.iter()) {
            acc = acc.add(&b.scale(*c))?;
        }
        return Ok(acc);
    }
    if witness.len() == n {
        return Ok(HermitianMatrix::from_diag(witness));
    }
    if witness.len() == n * n {
        return Ok(HermitianMatrix::from_coords(witness, n));
    }
    Err(Error::DimensionMismatch(format!(
        "ambient witness length {} matches no coordinate system",
        witness.len()
    )))
}

/// Verifies a separator against the instance margins.
pub fn verify_separator(
    inst: &InterpolationInstance,
    g: &HermitianMatrix,
    config: &SolverConfig,
) -> Result<bool> {
    use crate::linalg::min_eigenvalue;
    for x in &inst.lower {
        if min_eigenvalue(&g.sub(x)?)? < inst.delta - config.tol_feas {
            return Ok(false);
        }
    }
    for y in &inst.upper {
        if min_eigenvalue(&y.sub(g)?)? < inst.delta - config.tol_feas {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-trial record in a TR sampling run.
#[derive(Debug, Clone)]
pub struct TrTrial {
    pub seed: u64,
    pub injected: bool,
    pub ambient: Status,
    pub subsystem: Option<Status>,
}

/// Outcome counts of a TR sampling run, with replayable per-trial seeds.
#[derive(Debug, Clone)]
pub struct TrReport {
    pub k: usize,
    pub m: usize,
    pub level: usize,
    pub trials: usize,
    pub seed: u64,
    pub delta: f64,
    pub records: Vec<TrTrial>,
    pub ambient_feasible: usize,
    pub subsystem_feasible: usize,
    pub subsystem_infeasible: usize,
    pub unknown: usize,
    /// First trial index with an ambient separator but no subsystem one.
    pub first_counterexample: Option<usize>,
}

/// Samples seeded random instances with ambient-feasible bias, runs the
/// subsystem decision on those the ambient accepts, and tallies the results.
/// Runs over the recorded separation system additionally inject its boundary
/// instance as a deterministic extra trial, decided on both sides
/// unconditionally.
pub fn tr_property_check(
    system: &OperatorSubsystem,
    k: usize,
    m: usize,
    level: usize,
    trials: usize,
    seed: u64,
    config: &SolverConfig,
) -> Result<TrReport> {
    if trials < 1 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let mut report = TrReport {
        k,
        m,
        level,
        trials,
        seed,
        delta: config.delta_strict,
        records: Vec::new(),
        ambient_feasible: 0,
        subsystem_feasible: 0,
        subsystem_infeasible: 0,
        unknown: 0,
        first_counterexample: None,
    };

    let mut queue: Vec<(u64, bool, InterpolationInstance)> = Vec::new();
    if (k, m) == (2, 3)
        && level == 1
        && system.same_span(&instances::separation_system())
    {
        let (lower, upper) = instances::separation_interpolation_bounds();
        let inst = InterpolationInstance::new(
            system.clone(),
            1,
            lower,
            upper,
            config.delta_strict,
        )?;
        queue.push((seed, true, inst));
    }
    for t in 0..trials {
        let trial_seed = seed.wrapping_add(t as u64);
        let inst = random_instance(system, k, m, level, trial_seed, config.delta_strict)?;
        queue.push((trial_seed, false, inst));
    }

    // Trials are independent; run them concurrently and assemble the report
    // in the deterministic queue order.
    use rayon::prelude::*;
    let results: Vec<crate::Result<TrTrial>> = queue
        .into_par_iter()
        .map(|(trial_seed, injected, inst)| {
            let ambient = ambient_interpolate(&inst, config)?;
            let ambient_status = ambient.status();
            let subsystem = if ambient_status == Status::Feasible || injected {
                Some(subsystem_interpolate(&inst, config)?.status())
            } else {
                None
            };
            Ok(TrTrial { seed: trial_seed, injected, ambient: ambient_status, subsystem })
        })
        .collect();

    for (idx, trial) in results.into_iter().enumerate() {
        let trial = trial?;
        match trial.ambient {
            Status::Feasible => report.ambient_feasible += 1,
            Status::Unknown => report.unknown += 1,
            Status::Infeasible => {}
        }
        if let Some(s) = trial.subsystem {
            match s {
                Status::Feasible => report.subsystem_feasible += 1,
                Status::Infeasible => {
                    report.subsystem_infeasible += 1;
                    if trial.ambient == Status::Feasible && report.first_counterexample.is_none() {
                        report.first_counterexample = Some(idx);
                    }
                }
                Status::Unknown => report.unknown += 1,
            }
        }
        report.records.push(trial);
    }
    Ok(report)
}

/// Seeded instance generator: a random center `g0`, PSD-shifted bounds
/// around it, everything projected onto `M_r(span)` afterwards. Projection
/// can break ambient feasibility, so callers re-test.
pub fn random_instance(
    system: &OperatorSubsystem,
    k: usize,
    m: usize,
    level: usize,
    seed: u64,
    delta: f64,
) -> Result<InterpolationInstance> {
    let n = level * system.ambient_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g0 = random_hermitian(&mut rng, n);
    let mut lower = Vec::with_capacity(m);
    for _ in 0..m {
        let p = random_psd(&mut rng, n);
        let raw = g0.sub(&HermitianMatrix::identity(n).scale(delta))?.sub(&p)?;
        lower.push(project_level(system, &raw, level)?);
    }
    let mut upper = Vec::with_capacity(k);
    for _ in 0..k {
        let q = random_psd(&mut rng, n);
        let raw = g0.add(&HermitianMatrix::identity(n).scale(delta))?.add(&q)?;
        upper.push(project_level(system, &raw, level)?);
    }
    InterpolationInstance::new(system.clone(), level, lower, upper, delta)
}

fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let mut m = HermitianMatrix::zeros(n);
    for i in 0..n {
        m.set_entry(i, i, num::complex::Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        for j in i + 1..n {
            let z = num::complex::Complex64::new(
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            );
            m.set_entry(i, j, z);
        }
    }
    m
}

fn random_psd(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let m = random_hermitian(rng, n);
    // M * M is PSD; scale down to keep bounds near the center.
    let m2 = mat_square(&m);
    m2.scale(0.25 / (n as f64))
}

fn mat_square(m: &HermitianMatrix) -> HermitianMatrix {
    let n = m.dim();
    let mut data = vec![num::complex::Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = m.entry(i, k);
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                data[i * n + j] += aik * m.entry(k, j);
            }
        }
    }
    HermitianMatrix::symmetrize(data, n)
}

fn project_level(
    system: &OperatorSubsystem,
    m: &HermitianMatrix,
    level: usize,
) -> Result<HermitianMatrix> {
    if level == 1 {
        system.project_onto_span(m)
    } else {
        system.project_onto_level_span(m, level)
    }
}

/// Agreement record between the interpolation decision and the strict
/// maximal-tensor positivity of the associated element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    Agree(Status),
    Disagree { interpolation: Status, tensor: Status },
}

/// Runs both routes on the same data: `subsystem_interpolate` against
/// `max_positive(interpolation_element(lower, upper), strict)` with the
/// instance's own margin. Disagreement contradicts the cone equivalence and
/// is reported as such.
pub fn cross_check_theorem(
    inst: &InterpolationInstance,
    config: &SolverConfig,
) -> Result<ConsistencyVerdict> {
    let lhs = subsystem_interpolate(inst, config)?.status();
    let quotient = QuotientSystem::standard(inst.upper.len(), inst.lower.len())?;
    let element = interpolation_element(
        inst.system.clone(),
        quotient,
        inst.level,
        &inst.lower,
        &inst.upper,
    )?;
    let mut tensor_config = config.clone();
    tensor_config.delta_strict = inst.delta;
    let rhs = max_positive(&element, true, &tensor_config)?.status();
    if lhs == rhs {
        Ok(ConsistencyVerdict::Agree(lhs))
    } else {
        Ok(ConsistencyVerdict::Disagree { interpolation: lhs, tensor: rhs })
    }
}
