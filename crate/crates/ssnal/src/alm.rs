//! Outer augmented Lagrangian loop on the dual problem, with geometric
//! tolerance sequences, a capped geometric penalty schedule and the relative
//! KKT residual as the termination measure.

use std::time::{Duration, Instant};

use ndarray::Array1;

use crate::error::{Result, SsnalError};
use crate::problem::LassoProblem;
use crate::prox::{estimate_nnz, kkt_residual};
use crate::report::{Cost, SolveReport, SolveResult, StrategyCounts, TerminationReason};
use crate::ssn::{ssn_solve_tracked, InnerConfig, InnerStop};
use crate::trace::{NoTrace, OuterTrace, TraceSink};

#[derive(Debug, Clone)]
pub struct OuterConfig {
    /// Initial penalty; `None` picks `1 / max(1, max_i lambda_i)`.
    pub sigma0: Option<f64>,
    /// Multiplicative penalty growth per outer iteration (>= 1).
    pub sigma_growth: f64,
    /// Penalty cap; `f64::INFINITY` leaves the schedule unbounded.
    pub sigma_max: f64,
    /// `eps_k = eps0 * eps_decay^k` (summable since the decay is geometric).
    pub eps0: f64,
    pub eps_decay: f64,
    /// `delta_k = delta0 * delta_decay^k`.
    pub delta0: f64,
    pub delta_decay: f64,
    /// `delta'_k = delta_prime_decay^k`.
    pub delta_prime_decay: f64,
    /// Stop when the relative KKT residual drops below this.
    pub tol: f64,
    pub max_outer: usize,
    pub time_limit: Option<Duration>,
    pub inner: InnerConfig,
}

impl Default for OuterConfig {
    fn default() -> Self {
        OuterConfig {
            sigma0: None,
            sigma_growth: 3.0,
            sigma_max: 1e8,
            eps0: 1.0,
            eps_decay: 0.5,
            delta0: 1.0,
            delta_decay: 0.5,
            delta_prime_decay: 0.5,
            tol: 1e-6,
            max_outer: 1000,
            time_limit: None,
            inner: InnerConfig::default(),
        }
    }
}

impl OuterConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (
                self.sigma0.map_or(true, |s| s > 0.0 && s.is_finite()),
                "sigma0 must be positive",
            ),
            (self.sigma_growth >= 1.0, "sigma_growth must be >= 1"),
            (self.sigma_max > 0.0, "sigma_max must be positive"),
            (self.eps0 > 0.0, "eps0 must be positive"),
            (
                self.eps_decay > 0.0 && self.eps_decay < 1.0,
                "eps_decay must lie in (0, 1)",
            ),
            (self.delta0 > 0.0, "delta0 must be positive"),
            (
                self.delta_decay > 0.0 && self.delta_decay < 1.0,
                "delta_decay must lie in (0, 1)",
            ),
            (
                self.delta_prime_decay > 0.0 && self.delta_prime_decay < 1.0,
                "delta_prime_decay must lie in (0, 1)",
            ),
            (self.tol > 0.0, "tol must be positive"),
            (self.max_outer > 0, "max_outer must be positive"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(SsnalError::InvalidArgument(msg.into()));
            }
        }
        self.inner.validate()
    }
}

/// Mutable state of one augmented Lagrangian run.
#[derive(Debug)]
pub struct SolverState {
    pub x: Array1<f64>,
    pub y: Array1<f64>,
    pub z: Array1<f64>,
    pub sigma: f64,
    pub k: usize,
    pub eta_history: Vec<f64>,
    started: Instant,
    pub(crate) cost: Cost,
    newton_steps: usize,
    cg_iterations: usize,
    strategies: StrategyCounts,
    notes: Vec<String>,
    tol_floor_hits: usize,
    step_limit_hits: usize,
    cg_unconverged: usize,
    cholesky_fallbacks: usize,
}

impl SolverState {
    /// Fresh state at the origin (the sparse feasible starting point).
    pub fn new(prob: &LassoProblem, cfg: &OuterConfig) -> Result<Self> {
        cfg.validate()?;
        let sigma = cfg
            .sigma0
            .unwrap_or_else(|| 1.0 / prob.lambda().max_weight().max(1.0));
        Ok(SolverState {
            x: Array1::zeros(prob.n()),
            y: Array1::zeros(prob.m()),
            z: Array1::zeros(prob.n()),
            sigma,
            k: 0,
            eta_history: Vec::new(),
            started: Instant::now(),
            cost: Cost::new(prob.operator().apply_cost()),
            newton_steps: 0,
            cg_iterations: 0,
            strategies: StrategyCounts::default(),
            notes: Vec::new(),
            tol_floor_hits: 0,
            step_limit_hits: 0,
            cg_unconverged: 0,
            cholesky_fallbacks: 0,
        })
    }

    pub fn elapsed(&self) -> Duration {
        self.started.elapsed()
    }
}

/// One outer iteration: inner Newton solve at the current multiplier,
/// multiplier update, penalty growth. Returns the post-update trace record
/// (also emitted through `trace`).
pub fn outer_step(
    state: &mut SolverState,
    prob: &LassoProblem,
    cfg: &OuterConfig,
    trace: &mut dyn TraceSink,
) -> Result<OuterTrace> {
    let k = state.k;
    let alpha_h = 1.0; // squared loss
    let x_norm = state.x.dot(&state.x).sqrt();
    let b_norm = prob.response().dot(prob.response()).sqrt();
    let stop = InnerStop::AlmCriteria {
        eps_k: cfg.eps0 * cfg.eps_decay.powi(k as i32),
        delta_k: cfg.delta0 * cfg.delta_decay.powi(k as i32),
        delta_prime_k: cfg.delta_prime_decay.powi(k as i32),
        alpha_h,
        sigma: state.sigma,
        x_scale: 1.0 + x_norm,
        grad_floor: 1e-14 * (1.0 + b_norm),
    };

    let inner = ssn_solve_tracked(
        prob,
        &state.x,
        state.sigma,
        &state.y,
        &stop,
        &cfg.inner,
        trace,
        &mut state.cost,
    )?;

    #[cfg(debug_assertions)]
    {
        // multiplier-update identity: the cached prox iterate equals
        // x - sigma (A* y + z - c), recomputed through the operator
        let mut feas = prob.operator().apply_adjoint(&inner.y)? + &inner.z;
        if let Some(c) = prob.linear_term() {
            feas -= c;
        }
        let direct = &state.x - &(&feas * state.sigma);
        let diff = (&direct - &inner.prox).mapv(f64::abs).sum();
        let scale = 1.0 + inner.prox.mapv(f64::abs).sum();
        debug_assert!(
            diff <= 1e-12 * scale,
            "multiplier identity violated: {diff:e}"
        );
    }

    state.x = inner.prox;
    state.y = inner.y;
    state.z = inner.z;
    state.newton_steps += inner.stats.newton_steps;
    state.cg_iterations += inner.stats.cg_iterations;
    state.strategies.smw += inner.stats.strategies.smw;
    state.strategies.cholesky += inner.stats.strategies.cholesky;
    state.strategies.cg += inner.stats.strategies.cg;
    if inner.stats.tol_floored {
        state.tol_floor_hits += 1;
    }
    if inner.stats.hit_step_limit {
        state.step_limit_hits += 1;
    }
    state.cg_unconverged += inner.stats.cg_unconverged;
    state.cholesky_fallbacks += inner.stats.cholesky_fallbacks;

    let eta = kkt_residual(prob, &state.x)?;
    state.cost.full_apply(2);
    state.eta_history.push(eta);

    let record = OuterTrace {
        k,
        eta,
        primal_feasibility: inner.stats.feasibility,
        sigma: state.sigma,
        inner_steps: inner.stats.newton_steps,
    };
    trace.on_outer(&record);

    state.sigma = (state.sigma * cfg.sigma_growth).min(cfg.sigma_max);
    state.k += 1;
    Ok(record)
}

/// Runs the augmented Lagrangian iteration until the KKT residual drops
/// below `cfg.tol`, the iteration cap is hit, or the time limit expires.
pub fn solve(prob: &LassoProblem, cfg: &OuterConfig) -> Result<SolveResult> {
    solve_with_trace(prob, cfg, &mut NoTrace)
}

pub fn solve_with_trace(
    prob: &LassoProblem,
    cfg: &OuterConfig,
    trace: &mut dyn TraceSink,
) -> Result<SolveResult> {
    let mut state = SolverState::new(prob, cfg)?;
    let termination = loop {
        let record = outer_step(&mut state, prob, cfg, trace)?;
        if record.eta < cfg.tol {
            break TerminationReason::Converged;
        }
        if state.k >= cfg.max_outer {
            break TerminationReason::IterationLimit;
        }
        if let Some(limit) = cfg.time_limit {
            if state.elapsed() > limit {
                break TerminationReason::TimeLimit;
            }
        }
    };

    let eta = *state.eta_history.last().expect("at least one iteration");
    let objective = prob.objective(&state.x)?;
    state.cost.full_apply(1);
    let mut notes = state.notes.clone();
    if state.tol_floor_hits > 0 {
        notes.push(format!(
            "newton tolerance floored in {} outer iteration(s)",
            state.tol_floor_hits
        ));
    }
    if state.step_limit_hits > 0 {
        notes.push(format!(
            "inner step limit hit in {} outer iteration(s)",
            state.step_limit_hits
        ));
    }
    if state.cg_unconverged > 0 {
        notes.push(format!(
            "cg stopped at its iteration cap {} time(s)",
            state.cg_unconverged
        ));
    }
    if state.cholesky_fallbacks > 0 {
        notes.push(format!(
            "factorization fell back to cg {} time(s)",
            state.cholesky_fallbacks
        ));
    }

    let report = SolveReport {
        solver: "ssnal".into(),
        eta,
        nnz: estimate_nnz(&state.x),
        objective,
        iterations: state.k,
        newton_steps: state.newton_steps,
        cg_iterations: state.cg_iterations,
        strategies: state.strategies,
        matvecs: state.cost.full_applies(),
        matvec_equiv: state.cost.matvec_equiv(),
        primal_residual: None,
        dual_residual: None,
        wall: state.elapsed(),
        termination,
        notes,
    };
    Ok(SolveResult {
        x: state.x,
        dual: Some((state.y, state.z)),
        report,
    })
}
