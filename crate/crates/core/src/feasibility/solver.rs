//! Alternating-projection engine behind `solve_feasibility`.
//!
//! Primal side: Dykstra-corrected alternation between the affine manifold
//! `{ Z_p = A0_p - margin_p I + sum_i x_i A_i_p }` and the product PSD cone.
//! When the primal residual stalls, a dual alternation searches the
//! certificate manifold `{ <L, A_i> = 0, <L, A0 - margin I> = -1 }` against
//! the same cone. Whichever side verifies first decides the outcome; if the
//! iteration budget runs out, the outcome is Unknown with residuals attached.

use crate::error::Result;
use crate::linalg::{
    eig_hermitian, frobenius_inner, min_eigenvalue, project_psd, Cholesky, HermitianMatrix,
};

use super::{Certificate, FeasibilityOutcome, LmiProblem, SolveStats, SolverConfig};

pub(super) fn solve(problem: &LmiProblem, config: &SolverConfig) -> Result<FeasibilityOutcome> {
    let mut primal = Primal::new(problem)?;
    let mut dual = Dual::new(problem)?;
    let mut stats = SolveStats::default();

    // The zero point may already be feasible.
    if let Some(outcome) = primal.try_finish(problem, config, &stats)? {
        return Ok(outcome);
    }

    #[derive(PartialEq, Clone, Copy)]
    enum Phase {
        Primal,
        Dual,
    }
    let mut phase = Phase::Primal;

    for iter in 0..config.max_iters {
        stats.iterations = iter + 1;
        match phase {
            Phase::Primal => {
                primal.step(problem)?;
                stats.primal_residual = primal.residual();
                // The eigenvalue test costs as much as the projection, so
                // probe the affine point only periodically.
                if iter % 4 == 0 || primal.residual() < 10.0 * config.tol_feas {
                    if let Some(outcome) = primal.try_finish(problem, config, &stats)? {
                        return Ok(outcome);
                    }
                }
                if primal.stalled(config) && dual.reachable {
                    phase = Phase::Dual;
                    dual.reset_history();
                }
            }
            Phase::Dual => {
                dual.step(problem)?;
                stats.dual_residual = dual.residual();
                if let Some(cert) = dual.try_certificate(problem, config)? {
                    return Ok(FeasibilityOutcome::Infeasible { certificate: cert, stats });
                }
                if dual.stalled(config) {
                    phase = Phase::Primal;
                    primal.reset_history();
                }
            }
        }
    }

    stats.max_violation = primal.violation;
    Ok(FeasibilityOutcome::Unknown { stats })
}

struct Primal {
    shifted: Vec<HermitianMatrix>, // K_p = A0_p - margin_p I
    x: Vec<f64>,
    affine: Vec<HermitianMatrix>, // K_p + sum x_i A_i, consistent with x
    corr: Vec<HermitianMatrix>,
    chol: Cholesky,
    last_residual: f64,
    violation: f64,
    history: Vec<f64>,
    history_start: usize,
}

impl Primal {
    fn new(problem: &LmiProblem) -> Result<Self> {
        let n = problem.num_vars;
        let shifted: Vec<HermitianMatrix> = problem
            .blocks
            .iter()
            .map(|b| b.constant.shift(-b.margin))
            .collect();
        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let mut acc = 0.0;
                for block in &problem.blocks {
                    acc += frobenius_inner(&block.coefficients[i], &block.coefficients[j])?;
                }
                gram[i * n + j] = acc;
                gram[j * n + i] = acc;
            }
        }
        // I + G is always SPD.
        let chol = Cholesky::factor(&gram, n, 1.0).expect("I + gram is positive definite");
        let x = vec![0.0; n];
        let affine = shifted.clone();
        let corr = problem
            .blocks
            .iter()
            .map(|b| HermitianMatrix::zeros(b.dim()))
            .collect();
        Ok(Self {
            shifted,
            x,
            affine,
            corr,
            chol,
            last_residual: f64::INFINITY,
            violation: f64::INFINITY,
            history: Vec::new(),
            history_start: 0,
        })
    }

    fn step(&mut self, problem: &LmiProblem) -> Result<()> {
        let n = problem.num_vars;
        // Cone projection with Dykstra correction; the x part is free.
        let mut cone_pts = Vec::with_capacity(problem.blocks.len());
        for (p, _) in problem.blocks.iter().enumerate() {
            let shifted_pt = self.affine[p].add(&self.corr[p])?;
            let projected = project_psd(&shifted_pt)?;
            self.corr[p] = shifted_pt.sub(&projected)?;
            cone_pts.push(projected);
        }
        // Least-squares projection back onto the affine manifold.
        let mut rhs = self.x.clone();
        for i in 0..n {
            let mut acc = 0.0;
            for (p, block) in problem.blocks.iter().enumerate() {
                let diff = cone_pts[p].sub(&self.shifted[p])?;
                acc += frobenius_inner(&block.coefficients[i], &diff)?;
            }
            rhs[i] += acc;
        }
        let x_new = self.chol.solve(&rhs);
        let mut residual_sq = 0.0;
        for (xi, xn) in self.x.iter().zip(x_new.iter()) {
            residual_sq += (xi - xn) * (xi - xn);
        }
        for (p, block) in problem.blocks.iter().enumerate() {
            let mut z = self.shifted[p].clone();
            for (i, a) in block.coefficients.iter().enumerate() {
                z = z.add(&a.scale(x_new[i]))?;
            }
            residual_sq += cone_pts[p].sub(&z)?.norm_fro().powi(2);
            self.affine[p] = z;
        }
        self.x = x_new;
        self.last_residual = residual_sq.sqrt();
        self.history.push(self.last_residual);
        Ok(())
    }

    /// Feasibility test on the current affine point; the blocks carry the
    /// margins already, so PSD up to `tol_feas` is the whole condition.
    fn try_finish(
        &mut self,
        problem: &LmiProblem,
        config: &SolverConfig,
        stats: &SolveStats,
    ) -> Result<Option<FeasibilityOutcome>> {
        let mut worst = f64::NEG_INFINITY;
        for z in &self.affine {
            let lam = min_eigenvalue(z)?;
            worst = worst.max(-lam);
        }
        self.violation = worst.max(0.0);
        if worst <= config.tol_feas {
            let mut stats = stats.clone();
            stats.max_violation = self.violation;
            debug_assert!(problem.violation(&self.x)? <= problem_margin_slack(problem, config));
            return Ok(Some(FeasibilityOutcome::Feasible {
                witness: self.x.clone(),
                stats,
            }));
        }
        Ok(None)
    }

    fn residual(&self) -> f64 {
        self.last_residual
    }

    fn reset_history(&mut self) {
        self.history_start = self.history.len();
    }

    fn stalled(&self, config: &SolverConfig) -> bool {
        stalled_since(&self.history, self.history_start, config)
    }
}

fn problem_margin_slack(_problem: &LmiProblem, config: &SolverConfig) -> f64 {
    config.tol_feas * (1.0 + 1e-6)
}

struct Dual {
    // Row k < n pairs against the variable direction A_k across blocks; the
    // last row pairs against the shifted constants and is pinned to -1.
    rows: Vec<Vec<HermitianMatrix>>,
    target: Vec<f64>,
    pinv: Vec<f64>,
    reachable: bool,
    lam: Vec<HermitianMatrix>,
    corr: Vec<HermitianMatrix>,
    cone_candidate: Option<Vec<HermitianMatrix>>,
    last_residual: f64,
    history: Vec<f64>,
    history_start: usize,
}

impl Dual {
    fn new(problem: &LmiProblem) -> Result<Self> {
        let n = problem.num_vars;
        let mut rows: Vec<Vec<HermitianMatrix>> = Vec::with_capacity(n + 1);
        for i in 0..n {
            rows.push(problem.blocks.iter().map(|b| b.coefficients[i].clone()).collect());
        }
        rows.push(
            problem
                .blocks
                .iter()
                .map(|b| b.constant.shift(-b.margin))
                .collect(),
        );
        let mut target = vec![0.0; n + 1];
        target[n] = -1.0;

        // Gram of the rows and its spectral pseudo-inverse.
        let m = n + 1;
        let mut gram = vec![0.0; m * m];
        for k in 0..m {
            for l in 0..=k {
                let mut acc = 0.0;
                for p in 0..problem.blocks.len() {
                    acc += frobenius_inner(&rows[k][p], &rows[l][p])?;
                }
                gram[k * m + l] = acc;
                gram[l * m + k] = acc;
            }
        }
        let gram_mat = HermitianMatrix::from_real(&gram, m)?;
        let dec = eig_hermitian(&gram_mat)?;
        let lam_max = dec.eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
        let cut = 1e-12 * lam_max;
        let mut pinv = vec![0.0; m * m];
        for (k, &lam) in dec.eigenvalues.iter().enumerate() {
            if lam <= cut {
                continue;
            }
            for i in 0..m {
                let vik = dec.eigenvectors.entry(i, k).re;
                for j in 0..m {
                    pinv[i * m + j] += vik * dec.eigenvectors.entry(j, k).re / lam;
                }
            }
        }

        let zeros: Vec<HermitianMatrix> = problem
            .blocks
            .iter()
            .map(|b| HermitianMatrix::zeros(b.dim()))
            .collect();
        let mut dual = Self {
            rows,
            target,
            pinv,
            reachable: false,
            lam: zeros.clone(),
            corr: zeros,
            cone_candidate: None,
            last_residual: f64::INFINITY,
            history: Vec::new(),
            history_start: 0,
        };
        dual.lam = dual.project_affine(&dual.lam.clone())?;
        // If -1 is unreachable on the constant pairing, no normalized
        // certificate exists and the dual phase is pointless.
        let defect = dual.constraint_defect(&dual.lam)?;
        dual.reachable = defect <= 1e-8;
        Ok(dual)
    }

    fn pair_rows(&self, point: &[HermitianMatrix]) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut acc = 0.0;
            for (r, y) in row.iter().zip(point.iter()) {
                acc += frobenius_inner(r, y)?;
            }
            out.push(acc);
        }
        Ok(out)
    }

    fn constraint_defect(&self, point: &[HermitianMatrix]) -> Result<f64> {
        let pairs = self.pair_rows(point)?;
        let mut acc = 0.0;
        for (v, t) in pairs.iter().zip(self.target.iter()) {
            acc += (v - t) * (v - t);
        }
        Ok(acc.sqrt())
    }

    fn project_affine(&self, point: &[HermitianMatrix]) -> Result<Vec<HermitianMatrix>> {
        let m = self.rows.len();
        let pairs = self.pair_rows(point)?;
        let mut defect = vec![0.0; m];
        for k in 0..m {
            defect[k] = pairs[k] - self.target[k];
        }
        let mut weights = vec![0.0; m];
        for i in 0..m {
            for j in 0..m {
                weights[i] += self.pinv[i * m + j] * defect[j];
            }
        }
        let mut out = point.to_vec();
        for (k, w) in weights.iter().enumerate() {
            if *w == 0.0 {
                continue;
            }
            for (o, r) in out.iter_mut().zip(self.rows[k].iter()) {
                *o = o.sub(&r.scale(*w))?;
            }
        }
        Ok(out)
    }

    fn step(&mut self, _problem: &LmiProblem) -> Result<()> {
        let mut cone_pts = Vec::with_capacity(self.lam.len());
        for p in 0..self.lam.len() {
            let shifted = self.lam[p].add(&self.corr[p])?;
            let projected = project_psd(&shifted)?;
            self.corr[p] = shifted.sub(&projected)?;
            cone_pts.push(projected);
        }
        let next = self.project_affine(&cone_pts)?;
        let mut residual_sq = 0.0;
        for (c, a) in cone_pts.iter().zip(next.iter()) {
            residual_sq += c.sub(a)?.norm_fro().powi(2);
        }
        self.lam = next;
        self.last_residual = residual_sq.sqrt();
        self.history.push(self.last_residual);
        // The latest cone iterate doubles as the certificate candidate.
        self.cone_candidate = Some(cone_pts);
        Ok(())
    }

    /// Tests the latest PSD iterate, normalized so the constant pairing is
    /// exactly -1, against the certificate tolerances.
    fn try_certificate(
        &mut self,
        problem: &LmiProblem,
        config: &SolverConfig,
    ) -> Result<Option<Certificate>> {
        let Some(candidate) = self.cone_candidate.as_ref() else {
            return Ok(None);
        };
        let pairs = self.pair_rows(candidate)?;
        let constant_pair = *pairs.last().unwrap();
        if constant_pair >= -1e-9 {
            return Ok(None);
        }
        let scale = -1.0 / constant_pair;
        let n = problem.num_vars;
        for item in pairs.iter().take(n) {
            if (item * scale).abs() > config.tol_cert {
                return Ok(None);
            }
        }
        let multipliers: Vec<HermitianMatrix> =
            candidate.iter().map(|m| m.scale(scale)).collect();
        Ok(Some(Certificate { multipliers }))
    }

    fn residual(&self) -> f64 {
        self.last_residual
    }

    fn reset_history(&mut self) {
        self.history_start = self.history.len();
    }

    fn stalled(&self, config: &SolverConfig) -> bool {
        stalled_since(&self.history, self.history_start, config)
    }
}

fn stalled_since(history: &[f64], start: usize, config: &SolverConfig) -> bool {
    let len = history.len().saturating_sub(start);
    if len < config.stall_window {
        return false;
    }
    let old = history[history.len() - config.stall_window];
    let new = history[history.len() - 1];
    if new <= 0.0 {
        return false;
    }
    (old - new) < config.stall_ratio * old.max(f64::MIN_POSITIVE)
}
