//! Feasibility of linear matrix inequality systems: shared real variables,
//! several PSD blocks, per-block margins. Outcomes are tri-state: a witness,
//! a Farkas-style certificate, or an explicit Unknown with residuals. An
//! exact rational path handles all-diagonal instances with no tolerances.

pub mod exact;
mod solver;

use num::BigRational;
use num::Zero;

use crate::error::{Error, Result};
use crate::linalg::{frobenius_inner, min_eigenvalue, HermitianMatrix, TOL_EIG};

use exact::{rational_from_f64, rational_to_f64, ExactOutcome, LinearSystem};

/// One PSD constraint `A0 + sum_i x_i A_i >= margin * I`.
#[derive(Debug, Clone)]
pub struct AffineBlock {
    pub constant: HermitianMatrix,
    pub coefficients: Vec<HermitianMatrix>,
    pub margin: f64,
    pub strict: bool,
}

impl AffineBlock {
    pub fn new(constant: HermitianMatrix, coefficients: Vec<HermitianMatrix>) -> Self {
        Self { constant, coefficients, margin: 0.0, strict: false }
    }

    pub fn with_margin(mut self, margin: f64, strict: bool) -> Self {
        self.margin = margin;
        self.strict = strict;
        self
    }

    pub fn dim(&self) -> usize {
        self.constant.dim()
    }

    /// `A0 + sum_i x_i A_i`.
    pub fn evaluate(&self, x: &[f64]) -> HermitianMatrix {
        let mut acc = self.constant.clone();
        for (xi, ai) in x.iter().zip(self.coefficients.iter()) {
            acc = acc.add(&ai.scale(*xi)).expect("block dims validated");
        }
        acc
    }
}

/// LMI feasibility problem over `num_vars` shared real variables.
#[derive(Debug, Clone)]
pub struct LmiProblem {
    pub num_vars: usize,
    pub blocks: Vec<AffineBlock>,
}

impl LmiProblem {
    pub fn new(num_vars: usize, blocks: Vec<AffineBlock>) -> Result<Self> {
        let problem = Self { num_vars, blocks };
        problem.validate()?;
        Ok(problem)
    }

    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidProblem("no blocks".into()));
        }
        for (p, block) in self.blocks.iter().enumerate() {
            if block.coefficients.len() != self.num_vars {
                return Err(Error::InvalidProblem(format!(
                    "block {p}: {} coefficients for {} variables",
                    block.coefficients.len(),
                    self.num_vars
                )));
            }
            let dim = block.dim();
            for (i, c) in block.coefficients.iter().enumerate() {
                if c.dim() != dim {
                    return Err(Error::InvalidProblem(format!(
                        "block {p}: coefficient {i} has dim {} != {dim}",
                        c.dim()
                    )));
                }
            }
            if !block.margin.is_finite() || block.margin < 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "block {p}: margin {} out of range",
                    block.margin
                )));
            }
            if block.strict && block.margin <= 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "block {p}: strict block needs positive margin"
                )));
            }
        }
        Ok(())
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| {
            b.constant.is_diagonal() && b.coefficients.iter().all(|c| c.is_diagonal())
        })
    }

    /// Worst margin violation of `x` across blocks: `max_p (margin_p - lambda_min)`.
    pub fn violation(&self, x: &[f64]) -> Result<f64> {
        let mut worst = f64::NEG_INFINITY;
        for block in &self.blocks {
            let lam = min_eigenvalue(&block.evaluate(x))?;
            worst = worst.max(block.margin - lam);
        }
        Ok(worst)
    }
}

/// Solver knobs. Defaults match the shipped tolerances; the CLI surfaces them.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub tol_feas: f64,
    pub tol_cert: f64,
    pub tol_bisect: f64,
    pub delta_strict: f64,
    pub stall_window: usize,
    pub stall_ratio: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            tol_feas: 1e-7,
            tol_cert: 1e-7,
            tol_bisect: 1e-6,
            delta_strict: 1e-6,
            stall_window: 500,
            stall_ratio: 1e-3,
        }
    }
}

/// PSD multipliers, one per block, pairing to zero against every variable
/// direction and strictly negatively against the shifted constants.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub multipliers: Vec<HermitianMatrix>,
}

/// Iteration counters and final residuals, attached to every outcome.
/// `exact` marks decisions made by the rational path (no tolerances).
#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub iterations: usize,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub max_violation: f64,
    pub exact: bool,
}

impl SolveStats {
    pub(crate) fn exact() -> Self {
        Self { exact: true, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Feasible,
    Infeasible,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Status::Feasible => write!(f, "feasible"),
            Status::Infeasible => write!(f, "infeasible"),
            Status::Unknown => write!(f, "unknown"),
        }
    }
}

/// Tri-state outcome; the payload always verifies against the problem it was
/// produced for.
#[derive(Debug, Clone)]
pub enum FeasibilityOutcome {
    Feasible { witness: Vec<f64>, stats: SolveStats },
    Infeasible { certificate: Certificate, stats: SolveStats },
    Unknown { stats: SolveStats },
}

impl FeasibilityOutcome {
    pub fn status(&self) -> Status {
        match self {
            FeasibilityOutcome::Feasible { .. } => Status::Feasible,
            FeasibilityOutcome::Infeasible { .. } => Status::Infeasible,
            FeasibilityOutcome::Unknown { .. } => Status::Unknown,
        }
    }

    pub fn witness(&self) -> Option<&[f64]> {
        match self {
            FeasibilityOutcome::Feasible { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            FeasibilityOutcome::Infeasible { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn stats(&self) -> &SolveStats {
        match self {
            FeasibilityOutcome::Feasible { stats, .. }
            | FeasibilityOutcome::Infeasible { stats, .. }
            | FeasibilityOutcome::Unknown { stats } => stats,
        }
    }

    pub fn is_feasible(&self) -> bool {
        self.status() == Status::Feasible
    }

    pub fn is_infeasible(&self) -> bool {
        self.status() == Status::Infeasible
    }
}

/// Decides LMI feasibility with alternating projections (Dykstra corrected)
/// in the product of the affine manifold and the PSD blocks, switching to a
/// dual multiplier search when the primal residual stalls. Deterministic for
/// a fixed config: fixed iteration order, zero initial point, no randomness.
pub fn solve_feasibility(
    problem: &LmiProblem,
    config: &SolverConfig,
) -> Result<FeasibilityOutcome> {
    problem.validate()?;
    solver::solve(problem, config)
}

/// Verifies a certificate against the problem at `tol_cert`.
pub fn check_certificate(
    problem: &LmiProblem,
    cert: &Certificate,
    config: &SolverConfig,
) -> Result<bool> {
    if cert.multipliers.len() != problem.blocks.len() {
        return Err(Error::DimensionMismatch(format!(
            "certificate has {} multipliers for {} blocks",
            cert.multipliers.len(),
            problem.blocks.len()
        )));
    }
    for (lam, block) in cert.multipliers.iter().zip(problem.blocks.iter()) {
        if lam.dim() != block.dim() {
            return Err(Error::DimensionMismatch(format!(
                "multiplier dim {} vs block dim {}",
                lam.dim(),
                block.dim()
            )));
        }
        if min_eigenvalue(lam)? < -TOL_EIG {
            return Ok(false);
        }
    }
    for i in 0..problem.num_vars {
        let mut pairing = 0.0;
        for (lam, block) in cert.multipliers.iter().zip(problem.blocks.iter()) {
            pairing += frobenius_inner(lam, &block.coefficients[i])?;
        }
        if pairing.abs() > config.tol_cert {
            return Ok(false);
        }
    }
    let mut constant_pairing = 0.0;
    for (lam, block) in cert.multipliers.iter().zip(problem.blocks.iter()) {
        let shifted = block.constant.shift(-block.margin);
        constant_pairing += frobenius_inner(lam, &shifted)?;
    }
    Ok(constant_pairing <= -config.tol_cert)
}

/// Largest `t` (to `tol_bisect`) such that some common `x` satisfies every
/// block at margin `t`; the blocks' own margins are ignored during the scan.
/// Returns `(0, empty)` when even the margin-zero system is not certified
/// feasible.
pub fn max_margin(problem: &LmiProblem, config: &SolverConfig) -> Result<(f64, Vec<f64>)> {
    problem.validate()?;
    let at_margin = |t: f64| -> Result<Option<Vec<f64>>> {
        let mut scanned = problem.clone();
        for block in &mut scanned.blocks {
            block.margin = t;
            block.strict = false;
        }
        let outcome = solve_at(&scanned, config)?;
        Ok(outcome.witness().map(|w| w.to_vec()))
    };

    let Some(mut witness) = at_margin(0.0)? else {
        return Ok((0.0, Vec::new()));
    };
    let t_max = 1.0
        + problem
            .blocks
            .iter()
            .map(|b| b.constant.norm_fro())
            .fold(0.0, f64::max);
    if let Some(w) = at_margin(t_max)? {
        return Ok((t_max, w));
    }
    let mut lo = 0.0;
    let mut hi = t_max;
    while hi - lo > config.tol_bisect {
        let mid = 0.5 * (lo + hi);
        match at_margin(mid)? {
            Some(w) => {
                lo = mid;
                witness = w;
            }
            None => hi = mid,
        }
    }
    Ok((lo, witness))
}

/// Routes all-diagonal problems through the exact path, everything else
/// through the numeric solver.
fn solve_at(problem: &LmiProblem, config: &SolverConfig) -> Result<FeasibilityOutcome> {
    if problem.is_diagonal() {
        solve_diagonal_exact(problem)
    } else {
        solve_feasibility(problem, config)
    }
}

/// Exact rational decision for all-diagonal problems: the LMI collapses to a
/// finite system of linear inequalities, solved without tolerances. The
/// Infeasible payload carries multipliers derived from exact rational Farkas
/// coefficients.
pub fn solve_diagonal_exact(problem: &LmiProblem) -> Result<FeasibilityOutcome> {
    problem.validate()?;
    if !problem.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let (outcome, _) = solve_diagonal_exact_detailed(problem)?;
    Ok(outcome)
}

/// Exact diagonal path, also exposing the rational outcome for oracles.
pub fn solve_diagonal_exact_detailed(
    problem: &LmiProblem,
) -> Result<(FeasibilityOutcome, ExactOutcome)> {
    problem.validate()?;
    if !problem.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let system = diagonal_to_system(problem, None);
    let exact = system.solve();
    let dims: Vec<usize> = problem.blocks.iter().map(|b| b.dim()).collect();
    let outcome = exact_linear_outcome(&system, &exact, &dims);
    Ok((outcome, exact))
}

/// Converts an exact linear-system outcome into a `FeasibilityOutcome`,
/// regrouping row multipliers into one diagonal PSD matrix per block
/// (`block_dims[p]` consecutive rows belong to block `p`). Infeasibility
/// multipliers are normalized so the constant pairing is exactly -1.
pub fn exact_linear_outcome(
    system: &LinearSystem,
    exact: &ExactOutcome,
    block_dims: &[usize],
) -> FeasibilityOutcome {
    match exact {
        ExactOutcome::Feasible(x) => FeasibilityOutcome::Feasible {
            witness: x.iter().map(rational_to_f64).collect(),
            stats: SolveStats::exact(),
        },
        ExactOutcome::Infeasible(mult) => {
            let mut pairing = BigRational::zero();
            for (y, row) in mult.iter().zip(system.rows.iter()) {
                pairing += y * &row.constant;
            }
            let scale = -pairing;
            let mut multipliers = Vec::with_capacity(block_dims.len());
            let mut row = 0usize;
            for &dim in block_dims {
                let mut diag = Vec::with_capacity(dim);
                for _ in 0..dim {
                    diag.push(rational_to_f64(&(&mult[row] / &scale)));
                    row += 1;
                }
                multipliers.push(HermitianMatrix::from_diag(&diag));
            }
            debug_assert_eq!(row, system.rows.len());
            FeasibilityOutcome::Infeasible {
                certificate: Certificate { multipliers },
                stats: SolveStats::exact(),
            }
        }
    }
}

/// Exact rational margins may be supplied to replace the blocks' f64 margins
/// (used by deciders that carry exact data end to end).
pub fn diagonal_to_system(
    problem: &LmiProblem,
    exact_margins: Option<&[BigRational]>,
) -> LinearSystem {
    let mut system = LinearSystem::new(problem.num_vars);
    for (p, block) in problem.blocks.iter().enumerate() {
        let margin = exact_margins
            .map(|m| m[p].clone())
            .unwrap_or_else(|| rational_from_f64(block.margin));
        for j in 0..block.dim() {
            let constant = rational_from_f64(block.constant.entry(j, j).re) - &margin;
            let coeffs = block
                .coefficients
                .iter()
                .map(|c| rational_from_f64(c.entry(j, j).re))
                .collect();
            system.push(constant, coeffs);
        }
    }
    system
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::HermitianMatrix;

    fn diag(entries: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diag(entries)
    }

    fn m2_remark() -> [HermitianMatrix; 4] {
        [
            HermitianMatrix::from_real(&[1.0, 0.0, 0.0, 0.0], 2).unwrap(),
            HermitianMatrix::from_real(&[1.0, 1.0, 1.0, 1.0], 2).unwrap(),
            HermitianMatrix::from_real(&[1.1, 0.5, 0.5, 3.6], 2).unwrap(),
            HermitianMatrix::from_real(&[3.6, 0.5, 0.5, 1.1], 2).unwrap(),
        ]
    }

    /// The M2 interpolation system: find Hermitian g with
    /// a, b <= g - delta, g <= c - delta, g <= d - delta,
    /// written as four blocks over the four real coordinates of g.
    fn m2_interpolation_problem(delta: f64) -> LmiProblem {
        let [a, b, c, d] = m2_remark();
        let basis = HermitianMatrix::hermitian_basis(2);
        let neg_basis: Vec<_> = basis.iter().map(|m| m.scale(-1.0)).collect();
        let blocks = vec![
            AffineBlock::new(a.scale(-1.0), basis.clone()).with_margin(delta, true),
            AffineBlock::new(b.scale(-1.0), basis.clone()).with_margin(delta, true),
            AffineBlock::new(c.clone(), neg_basis.clone()).with_margin(delta, true),
            AffineBlock::new(d.clone(), neg_basis).with_margin(delta, true),
        ];
        LmiProblem::new(4, blocks).unwrap()
    }

    #[test]
    fn trivial_feasible_block() {
        // diag(1, -1) + x diag(0, 1) >= 0, witness any x >= 1
        let block = AffineBlock::new(diag(&[1.0, -1.0]), vec![diag(&[0.0, 1.0])]);
        let problem = LmiProblem::new(1, vec![block]).unwrap();
        let config = SolverConfig::default();
        let outcome = solve_feasibility(&problem, &config).unwrap();
        let witness = outcome.witness().expect("feasible");
        assert!(problem.violation(witness).unwrap() <= config.tol_feas);
        assert!(witness[0] >= 1.0 - config.tol_feas);
    }

    #[test]
    fn trivial_infeasible_block_certifies() {
        // diag(-1, 0) + x diag(0, 1) >= 0: first entry is -1 for every x
        let block = AffineBlock::new(diag(&[-1.0, 0.0]), vec![diag(&[0.0, 1.0])]);
        let problem = LmiProblem::new(1, vec![block]).unwrap();
        let config = SolverConfig::default();
        let outcome = solve_feasibility(&problem, &config).unwrap();
        let cert = outcome.certificate().expect("infeasible");
        assert!(check_certificate(&problem, cert, &config).unwrap());
        // The canonical certificate is diag(1, 0); ours may be scaled.
        let lam = &cert.multipliers[0];
        assert!(lam.entry(0, 0).re > 0.0);
    }

    #[test]
    fn m2_interpolation_is_infeasible_with_certificate() {
        let problem = m2_interpolation_problem(1e-6);
        let config = SolverConfig::default();
        let outcome = solve_feasibility(&problem, &config).unwrap();
        assert!(outcome.is_infeasible(), "status: {:?}", outcome.status());
        let cert = outcome.certificate().unwrap();
        assert!(check_certificate(&problem, cert, &config).unwrap());
    }

    #[test]
    fn check_certificate_rejects_zero_multipliers() {
        let block = AffineBlock::new(diag(&[-1.0, 0.0]), vec![diag(&[0.0, 1.0])]);
        let problem = LmiProblem::new(1, vec![block]).unwrap();
        let cert = Certificate { multipliers: vec![HermitianMatrix::zeros(2)] };
        assert!(!check_certificate(&problem, &cert, &SolverConfig::default()).unwrap());
    }

    #[test]
    fn check_certificate_accepts_hand_built_example() {
        let block = AffineBlock::new(diag(&[-1.0, 0.0]), vec![diag(&[0.0, 1.0])]);
        let problem = LmiProblem::new(1, vec![block]).unwrap();
        let cert = Certificate { multipliers: vec![diag(&[1.0, 0.0])] };
        assert!(check_certificate(&problem, &cert, &SolverConfig::default()).unwrap());
    }

    #[test]
    fn max_margin_constant_identity() {
        // I2 with a vacuous variable: the best uniform margin is 1
        let block = AffineBlock::new(HermitianMatrix::identity(2), vec![HermitianMatrix::zeros(2)]);
        let problem = LmiProblem::new(1, vec![block]).unwrap();
        let config = SolverConfig::default();
        let (t, witness) = max_margin(&problem, &config).unwrap();
        assert!((t - 1.0).abs() <= 2.0 * config.tol_bisect, "t = {t}");
        assert!(!witness.is_empty());
    }

    #[test]
    fn max_margin_degenerate_zero() {
        // diag(0,0) + x diag(1,-1): margin 0 needs x = 0; any t > 0 fails
        let block = AffineBlock::new(diag(&[0.0, 0.0]), vec![diag(&[1.0, -1.0])]);
        let problem = LmiProblem::new(1, vec![block]).unwrap();
        let config = SolverConfig::default();
        let (t, witness) = max_margin(&problem, &config).unwrap();
        assert!(t <= config.tol_bisect, "t = {t}");
        assert!(!witness.is_empty(), "margin zero is attainable here");
    }

    /// Grid oracle for the M2 remark premise: no Hermitian g satisfies even
    /// the non-strict a, b <= g <= c, d. Scans the box the diagonal bounds
    /// force, refined near the analytic boundary (g11, g22 in [1, 1.1]).
    #[test]
    fn max_margin_m2_premise_is_zero_by_grid_oracle() {
        let [a, b, c, d] = m2_remark();
        let steps = 24usize;
        let mut found = false;
        'outer: for i1 in 0..=steps {
            let g11 = 1.0 + 0.1 * (i1 as f64) / steps as f64;
            for i2 in 0..=steps {
                let g22 = 1.0 + 0.1 * (i2 as f64) / steps as f64;
                // z constrained near [0.9, 1.1] by |z-1|^2 <= (g11-1)(g22-1),
                // scan generously
                for iz in 0..=steps {
                    let z = 0.8 + 0.4 * (iz as f64) / steps as f64;
                    let g = HermitianMatrix::from_real(&[g11, z, z, g22], 2).unwrap();
                    let ok = min_eigenvalue(&g.sub(&a).unwrap()).unwrap() >= -1e-9
                        && min_eigenvalue(&g.sub(&b).unwrap()).unwrap() >= -1e-9
                        && min_eigenvalue(&c.sub(&g).unwrap()).unwrap() >= -1e-9
                        && min_eigenvalue(&d.sub(&g).unwrap()).unwrap() >= -1e-9;
                    if ok {
                        found = true;
                        break 'outer;
                    }
                }
            }
        }
        assert!(!found, "grid oracle found an interpolant the analysis excludes");

        let problem = m2_interpolation_problem(1e-6);
        let config = SolverConfig::default();
        let (t, witness) = max_margin(&problem, &config).unwrap();
        assert_eq!(t, 0.0);
        assert!(witness.is_empty());
    }

    #[test]
    fn diagonal_exact_trivial_infeasible() {
        // 0 <= x <= -1 in C^1, expect multipliers proportional to (1, 1)
        let blocks = vec![
            AffineBlock::new(diag(&[0.0]), vec![diag(&[1.0])]),
            AffineBlock::new(diag(&[-1.0]), vec![diag(&[-1.0])]),
        ];
        let problem = LmiProblem::new(1, blocks).unwrap();
        let outcome = solve_diagonal_exact(&problem).unwrap();
        let cert = outcome.certificate().expect("infeasible");
        let l0 = cert.multipliers[0].entry(0, 0).re;
        let l1 = cert.multipliers[1].entry(0, 0).re;
        assert_eq!(l0, l1);
        assert!(l0 > 0.0);
        assert!(check_certificate(&problem, cert, &SolverConfig::default()).unwrap());
    }

    #[test]
    fn diagonal_exact_rejects_dense_blocks() {
        let x = HermitianMatrix::from_real(&[0.0, 1.0, 1.0, 0.0], 2).unwrap();
        let problem =
            LmiProblem::new(0, vec![AffineBlock::new(x, vec![])]).unwrap();
        assert!(matches!(solve_diagonal_exact(&problem), Err(Error::NotDiagonal)));
    }

    #[test]
    fn numeric_and_exact_agree_on_diagonal_instances() {
        let config = SolverConfig::default();
        // Feasible: x >= 1/2 in both entries
        let blocks = vec![AffineBlock::new(
            diag(&[-0.5, -0.5]),
            vec![diag(&[1.0, 1.0])],
        )];
        let problem = LmiProblem::new(1, blocks).unwrap();
        let numeric = solve_feasibility(&problem, &config).unwrap();
        let exact = solve_diagonal_exact(&problem).unwrap();
        assert_eq!(numeric.status(), exact.status());

        // Infeasible: x >= 1 and x <= -1
        let blocks = vec![
            AffineBlock::new(diag(&[-1.0]), vec![diag(&[1.0])]),
            AffineBlock::new(diag(&[-1.0]), vec![diag(&[-1.0])]),
        ];
        let problem = LmiProblem::new(1, blocks).unwrap();
        let numeric = solve_feasibility(&problem, &config).unwrap();
        let exact = solve_diagonal_exact(&problem).unwrap();
        assert_eq!(numeric.status(), exact.status());
        assert!(numeric.is_infeasible());
    }

    #[test]
    fn feasible_stays_feasible_when_margin_drops() {
        let block = AffineBlock::new(diag(&[1.0, -1.0]), vec![diag(&[0.0, 1.0])])
            .with_margin(0.25, false);
        let problem = LmiProblem::new(1, vec![block]).unwrap();
        let config = SolverConfig::default();
        let outcome = solve_feasibility(&problem, &config).unwrap();
        let witness = outcome.witness().expect("feasible").to_vec();

        let mut relaxed = problem.clone();
        relaxed.blocks[0].margin = 0.0;
        // The same witness certifies the relaxed problem.
        assert!(relaxed.violation(&witness).unwrap() <= config.tol_feas);
        assert!(solve_feasibility(&relaxed, &config).unwrap().is_feasible());
    }
}
