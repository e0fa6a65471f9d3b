//! Semismooth Newton solver for the inner subproblem `min_y psi(y)`.
//!
//! For the squared loss with regularizer weights `lambda` and a fixed
//! multiplier estimate `xt`, the subproblem objective is
//!
//! ```text
//! psi(y) = h*(y) + ||u||^2 / (2 sigma) - ||xt||^2 / (2 sigma),
//! u = Prox_{sigma p}(w),   w = xt - sigma (A* y - c),
//! grad psi(y) = grad h*(y) - A u.
//! ```
//!
//! The generalized Jacobian at `y` is `V = H + sigma A_J A_J^T` where `J`
//! collects the coordinates with `|w_j| > sigma lambda_j` and `H` is the
//! identity for the squared loss. Because `V` only sees the `r = |J|` active
//! columns, the Newton direction is obtained from one of three strategies:
//!
//! * `Smw`: invert the `r x r` system `(sigma^{-1} I + A_J^T A_J)` and expand
//!   through the Sherman-Morrison-Woodbury identity — `O(r^2 m)` work;
//! * `DirectCholesky`: assemble `I_m + sigma A_J A_J^T` and factor it —
//!   `O(m^2 r)` work;
//! * `Cg`: conjugate gradients on `v -> v + sigma A_J (A_J^T v)`, the only
//!   route available to black-box operators (via a 0/1 mask).

use ndarray::Array1;

use crate::error::{Result, SsnalError};
use crate::linalg::{self, CholeskyFactor};
use crate::operators::{IndexSet, LinearOperator};
use crate::problem::LassoProblem;
use crate::prox::{self, SquaredLoss, WeightedL1};
use crate::report::{Cost, StrategyCounts};
use crate::trace::{InnerTrace, TraceSink};

/// Parameters of the inner Newton iteration.
#[derive(Debug, Clone)]
pub struct InnerConfig {
    /// Armijo slope fraction, in `(0, 1/2)`.
    pub mu: f64,
    /// Backtracking factor, in `(0, 1)`.
    pub delta: f64,
    /// Inexactness exponent, in `(0, 1]`.
    pub tau: f64,
    /// Inexactness cap, in `(0, 1)`.
    pub eta_bar: f64,
    pub max_newton_steps: usize,
    pub cg_max_iters: usize,
    /// Largest active-set size routed to the Sherman-Morrison-Woodbury path.
    pub smw_r_max: usize,
    /// Largest row dimension routed to the dense Cholesky path.
    pub cholesky_m_max: usize,
}

impl Default for InnerConfig {
    fn default() -> Self {
        InnerConfig {
            mu: 1e-4,
            delta: 0.5,
            tau: 0.5,
            eta_bar: 1e-2,
            max_newton_steps: 50,
            cg_max_iters: 300,
            smw_r_max: 1500,
            cholesky_m_max: 3000,
        }
    }
}

impl InnerConfig {
    pub fn validate(&self) -> Result<()> {
        let checks = [
            (self.mu > 0.0 && self.mu < 0.5, "mu must lie in (0, 1/2)"),
            (self.delta > 0.0 && self.delta < 1.0, "delta must lie in (0, 1)"),
            (self.tau > 0.0 && self.tau <= 1.0, "tau must lie in (0, 1]"),
            (
                self.eta_bar > 0.0 && self.eta_bar < 1.0,
                "eta_bar must lie in (0, 1)",
            ),
            (self.max_newton_steps > 0, "max_newton_steps must be positive"),
            (self.cg_max_iters > 0, "cg_max_iters must be positive"),
        ];
        for (ok, msg) in checks {
            if !ok {
                return Err(SsnalError::InvalidArgument(msg.into()));
            }
        }
        Ok(())
    }
}

/// Linear-system strategy for one Newton step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStrategy {
    Smw,
    DirectCholesky,
    Cg,
}

impl SolveStrategy {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStrategy::Smw => "smw",
            SolveStrategy::DirectCholesky => "cholesky",
            SolveStrategy::Cg => "cg",
        }
    }
}

/// Hessian descriptor of `h*`; the squared loss gives the identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HessianKind {
    Identity,
}

/// Description of one Newton system `(H + sigma A_J A_J^T) d = rhs`.
#[derive(Debug, Clone)]
pub struct NewtonSystem {
    pub active: IndexSet,
    pub sigma: f64,
    pub hessian: HessianKind,
    pub strategy: SolveStrategy,
}

impl NewtonSystem {
    pub fn r(&self) -> usize {
        self.active.len()
    }
}

/// Dispatch rule: SMW for small active sets, dense Cholesky for moderate row
/// counts, conjugate gradients otherwise. Black-box operators always go
/// through CG since no column submatrix is available.
pub fn choose_strategy(
    r: usize,
    m: usize,
    supports_submatrix: bool,
    cfg: &InnerConfig,
) -> SolveStrategy {
    if !supports_submatrix {
        SolveStrategy::Cg
    } else if r <= cfg.smw_r_max && r < m {
        SolveStrategy::Smw
    } else if m <= cfg.cholesky_m_max {
        SolveStrategy::DirectCholesky
    } else {
        SolveStrategy::Cg
    }
}

/// Active set `J = { j : |x_j| > sigma lambda_j }`. Boundary coordinates
/// (`|x_j| = sigma lambda_j`) stay inactive, which picks the smallest valid
/// generalized Jacobian.
pub fn assemble_active_set(x: &Array1<f64>, lambda: &WeightedL1, sigma: f64) -> IndexSet {
    assert!(sigma > 0.0);
    let indices = x
        .iter()
        .enumerate()
        .filter(|(j, v)| v.abs() > sigma * lambda.weight(*j))
        .map(|(j, _)| j)
        .collect();
    IndexSet::new(indices, x.len()).expect("indices generated in range")
}

/// Full evaluation of the subproblem at `y`.
#[derive(Debug, Clone)]
pub struct PsiPoint {
    pub value: f64,
    pub grad: Array1<f64>,
    /// `u = Prox_{sigma p}(w)`: the primal candidate / next multiplier.
    pub prox: Array1<f64>,
    /// `w = xt - sigma (A* y - c)`: the prox argument (active-set source).
    pub prox_arg: Array1<f64>,
    /// `A* y`, cached for the line search.
    pub adjoint_y: Array1<f64>,
}

fn eval_psi(
    prob: &LassoProblem,
    loss: &SquaredLoss,
    xt: &Array1<f64>,
    sigma: f64,
    y: &Array1<f64>,
    cost: &mut Cost,
) -> Result<PsiPoint> {
    let adjoint_y = prob.operator().apply_adjoint(y)?;
    cost.full_apply(1);
    let mut w = xt - &(&adjoint_y * sigma);
    if let Some(c) = prob.linear_term() {
        w += &(c * sigma);
    }
    let prox = prox::soft_threshold_scaled(&w, prob.lambda(), sigma);
    let au = prob.operator().apply(&prox)?;
    cost.full_apply(1);
    let grad = loss.grad_hstar(y)? - &au;
    let value =
        loss.hstar_value(y)? + prox.dot(&prox) / (2.0 * sigma) - xt.dot(xt) / (2.0 * sigma);
    Ok(PsiPoint {
        value,
        grad,
        prox,
        prox_arg: w,
        adjoint_y,
    })
}

/// Subproblem objective at `y` (the conjugate-indicator term vanishes for
/// the l1 regularizer since the projection lands inside the ball).
pub fn psi_value(prob: &LassoProblem, xt: &Array1<f64>, sigma: f64, y: &Array1<f64>) -> Result<f64> {
    check_inner_args(prob, xt, sigma, y)?;
    let loss = SquaredLoss::new(prob.response().clone())?;
    let mut cost = Cost::new(prob.operator().apply_cost());
    Ok(eval_psi(prob, &loss, xt, sigma, y, &mut cost)?.value)
}

/// Subproblem gradient at `y`, returned together with the prox iterate `u`
/// so callers can reuse it for the active set and the multiplier update.
pub fn psi_grad(
    prob: &LassoProblem,
    xt: &Array1<f64>,
    sigma: f64,
    y: &Array1<f64>,
) -> Result<(Array1<f64>, Array1<f64>)> {
    check_inner_args(prob, xt, sigma, y)?;
    let loss = SquaredLoss::new(prob.response().clone())?;
    let mut cost = Cost::new(prob.operator().apply_cost());
    let p = eval_psi(prob, &loss, xt, sigma, y, &mut cost)?;
    Ok((p.grad, p.prox))
}

fn check_inner_args(
    prob: &LassoProblem,
    xt: &Array1<f64>,
    sigma: f64,
    y: &Array1<f64>,
) -> Result<()> {
    if xt.len() != prob.n() {
        return Err(SsnalError::dims(prob.n(), xt.len(), "multiplier estimate"));
    }
    if y.len() != prob.m() {
        return Err(SsnalError::dims(prob.m(), y.len(), "dual iterate"));
    }
    if !(sigma > 0.0) {
        return Err(SsnalError::InvalidArgument(format!(
            "penalty must be positive, got {sigma}"
        )));
    }
    Ok(())
}

/// Inner stopping rule.
#[derive(Debug, Clone)]
pub enum InnerStop {
    /// Stop when `||grad psi|| <= tol`.
    GradNorm(f64),
    /// The implementable forms of the outer criteria: stop when the gradient
    /// norm is below the most stringent of
    /// `(A')  sqrt(alpha_h / sigma) * eps_k`,
    /// `(B1') sqrt(alpha_h * sigma) * delta_k * feas`,
    /// `(B2') delta_prime_k * feas`,
    /// with `feas = ||A* y + z - c||`. The B-type bounds apply only while
    /// the multiplier update still moves at working precision.
    AlmCriteria {
        eps_k: f64,
        delta_k: f64,
        delta_prime_k: f64,
        alpha_h: f64,
        sigma: f64,
        /// `1 + ||xt||`; scale for the stationary-multiplier test.
        x_scale: f64,
        /// absolute floor on the demanded gradient norm
        grad_floor: f64,
    },
}

impl InnerStop {
    /// Returns `(threshold, floored)`.
    fn threshold(&self, feas_norm: f64) -> (f64, bool) {
        match self {
            InnerStop::GradNorm(t) => (*t, false),
            InnerStop::AlmCriteria {
                eps_k,
                delta_k,
                delta_prime_k,
                alpha_h,
                sigma,
                x_scale,
                grad_floor,
            } => {
                let mut t = (alpha_h / sigma).sqrt() * eps_k;
                if sigma * feas_norm > 1e-12 * x_scale {
                    let b1 = (alpha_h * sigma).sqrt() * delta_k * feas_norm;
                    let b2 = delta_prime_k * feas_norm;
                    t = t.min(b1).min(b2);
                }
                if t < *grad_floor {
                    (*grad_floor, true)
                } else {
                    (t, false)
                }
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct InnerStats {
    pub newton_steps: usize,
    pub cg_iterations: usize,
    pub strategies: StrategyCounts,
    pub hit_step_limit: bool,
    /// The demanded Newton-system tolerance fell below working precision and
    /// was clipped.
    pub tol_floored: bool,
    pub cg_unconverged: usize,
    /// Factorization attempts that lost positive definiteness to roundoff
    /// and were redone with CG.
    pub cholesky_fallbacks: usize,
    pub grad_norm: f64,
    /// `||A* y + z - c||` at exit.
    pub feasibility: f64,
}

#[derive(Debug, Clone)]
pub struct InnerSolution {
    pub y: Array1<f64>,
    pub z: Array1<f64>,
    /// Prox iterate `u`; equals the updated multiplier `xt - sigma (A*y + z - c)`.
    pub prox: Array1<f64>,
    pub stats: InnerStats,
}

/// Runs the Newton iteration from `y0` until `stop` is met or the step limit
/// is reached (recorded in the stats, not an error).
pub fn ssn_solve(
    prob: &LassoProblem,
    xt: &Array1<f64>,
    sigma: f64,
    y0: &Array1<f64>,
    stop: &InnerStop,
    cfg: &InnerConfig,
    trace: &mut dyn TraceSink,
) -> Result<InnerSolution> {
    let mut cost = Cost::new(prob.operator().apply_cost());
    ssn_solve_tracked(prob, xt, sigma, y0, stop, cfg, trace, &mut cost)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn ssn_solve_tracked(
    prob: &LassoProblem,
    xt: &Array1<f64>,
    sigma: f64,
    y0: &Array1<f64>,
    stop: &InnerStop,
    cfg: &InnerConfig,
    trace: &mut dyn TraceSink,
    cost: &mut Cost,
) -> Result<InnerSolution> {
    check_inner_args(prob, xt, sigma, y0)?;
    cfg.validate()?;
    let loss = SquaredLoss::new(prob.response().clone())?;
    let op = prob.operator();
    let m = prob.m();

    let mut y = y0.clone();
    let mut point = eval_psi(prob, &loss, xt, sigma, &y, cost)?;
    let mut stats = InnerStats::default();

    loop {
        let grad_norm = point.grad.dot(&point.grad).sqrt();
        if !grad_norm.is_finite() || !point.value.is_finite() {
            return Err(SsnalError::NonFinite {
                context: "inner Newton iterate",
            });
        }
        let feas = feasibility_norm(xt, &point.prox, sigma);
        stats.grad_norm = grad_norm;
        stats.feasibility = feas;
        let (threshold, floored) = stop.threshold(feas);
        stats.tol_floored |= floored;
        if grad_norm <= threshold {
            break;
        }
        if stats.newton_steps >= cfg.max_newton_steps {
            stats.hit_step_limit = true;
            break;
        }

        let active = assemble_active_set(&point.prox_arg, prob.lambda(), sigma);
        let strategy = choose_strategy(active.len(), m, op.supports_submatrix(), cfg);
        let system = NewtonSystem {
            active,
            sigma,
            hessian: HessianKind::Identity,
            strategy,
        };
        let rhs = -&point.grad;

        let raw_tol = cfg.eta_bar.min(grad_norm.powf(1.0 + cfg.tau));
        let floor = 1e-14 * (1.0 + grad_norm);
        let tol = raw_tol.max(floor);
        stats.tol_floored |= raw_tol < floor;

        let mut strategy = strategy;
        let outcome = match solve_newton_system_tracked(&system, op, &rhs, tol, cfg, Some(cost)) {
            Ok(o) => o,
            // roundoff can push the factorizations past positive definiteness
            // when sigma * ||A_J||^2 is extreme; CG still produces a usable
            // direction there
            Err(SsnalError::CholeskyFailure { .. }) if strategy != SolveStrategy::Cg => {
                stats.cholesky_fallbacks += 1;
                strategy = SolveStrategy::Cg;
                let retry = NewtonSystem {
                    strategy: SolveStrategy::Cg,
                    ..system.clone()
                };
                solve_newton_system_tracked(&retry, op, &rhs, tol, cfg, Some(cost))?
            }
            Err(e) => return Err(e),
        };
        match strategy {
            SolveStrategy::Smw => stats.strategies.smw += 1,
            SolveStrategy::DirectCholesky => stats.strategies.cholesky += 1,
            SolveStrategy::Cg => stats.strategies.cg += 1,
        }
        stats.cg_iterations += outcome.cg_iterations;
        if !outcome.cg_converged {
            stats.cg_unconverged += 1;
        }
        let d = outcome.direction;
        let slope = point.grad.dot(&d);

        // One adjoint of the direction makes every Armijo trial O(m + n).
        let adjoint_d = op.apply_adjoint(&d)?;
        cost.full_apply(1);
        let sigma_adjoint_d = &adjoint_d * sigma;

        let y_dot_d = y.dot(&d);
        let d_dot_d = d.dot(&d);
        let b_dot_d = prob.response().dot(&d);
        let y_norm_sq = y.dot(&y);
        let b_dot_y = prob.response().dot(&y);
        let xt_norm_sq = xt.dot(xt);

        let mut alpha = 1.0;
        let mut accepted = false;
        for backtrack in 0..=60 {
            if backtrack > 0 {
                alpha *= cfg.delta;
            }
            let w_trial = &point.prox_arg - &(&sigma_adjoint_d * alpha);
            let u_trial = prox::soft_threshold_scaled(&w_trial, prob.lambda(), sigma);
            let hstar = 0.5 * (y_norm_sq + 2.0 * alpha * y_dot_d + alpha * alpha * d_dot_d)
                + b_dot_y
                + alpha * b_dot_d;
            let trial_value =
                hstar + u_trial.dot(&u_trial) / (2.0 * sigma) - xt_norm_sq / (2.0 * sigma);
            if trial_value <= point.value + cfg.mu * alpha * slope {
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(SsnalError::LineSearchFailure { backtracks: 60 });
        }

        y += &(&d * alpha);
        point = eval_psi(prob, &loss, xt, sigma, &y, cost)?;
        stats.newton_steps += 1;
        trace.on_inner(&InnerTrace {
            step: stats.newton_steps,
            grad_norm: point.grad.dot(&point.grad).sqrt(),
            active_size: system.active.len(),
            strategy,
            cg_iterations: outcome.cg_iterations,
            step_size: alpha,
        });
    }

    let z = prox::project_linf_ball(&(&point.prox_arg / sigma), prob.lambda());
    Ok(InnerSolution {
        y,
        z,
        prox: point.prox,
        stats,
    })
}

/// `||A* y + z - c|| = ||xt - u|| / sigma` through the Moreau decomposition
/// of the prox argument.
fn feasibility_norm(xt: &Array1<f64>, prox: &Array1<f64>, sigma: f64) -> f64 {
    let diff = xt - prox;
    diff.dot(&diff).sqrt() / sigma
}

#[derive(Debug)]
pub struct NewtonSolveOutcome {
    pub direction: Array1<f64>,
    pub cg_iterations: usize,
    /// False only when the CG path stopped at its iteration cap.
    pub cg_converged: bool,
}

/// Solves `(I_m + sigma A_J A_J^T) d = rhs` with the strategy recorded in
/// `sys`. The tolerance applies to the CG path; the factorization paths are
/// exact up to roundoff.
pub fn solve_newton_system(
    sys: &NewtonSystem,
    op: &LinearOperator,
    rhs: &Array1<f64>,
    tol: f64,
    cfg: &InnerConfig,
) -> Result<NewtonSolveOutcome> {
    solve_newton_system_tracked(sys, op, rhs, tol, cfg, None)
}

fn solve_newton_system_tracked(
    sys: &NewtonSystem,
    op: &LinearOperator,
    rhs: &Array1<f64>,
    tol: f64,
    cfg: &InnerConfig,
    mut cost: Option<&mut Cost>,
) -> Result<NewtonSolveOutcome> {
    let m = op.rows();
    if rhs.len() != m {
        return Err(SsnalError::dims(m, rhs.len(), "newton rhs"));
    }
    let sigma = sys.sigma;
    if !(sigma > 0.0) {
        return Err(SsnalError::InvalidArgument(format!(
            "penalty must be positive, got {sigma}"
        )));
    }
    let r = sys.r();
    if r == 0 {
        // V = I
        return Ok(NewtonSolveOutcome {
            direction: rhs.clone(),
            cg_iterations: 0,
            cg_converged: true,
        });
    }

    match sys.strategy {
        SolveStrategy::Smw => {
            let sub = op.column_submatrix(&sys.active)?;
            let mut gram = op.gram_submatrix(&sys.active)?.into_data();
            if let Some(c) = cost.as_deref_mut() {
                c.flops(gram_flops(&sub, r));
            }
            let inv_sigma = 1.0 / sigma;
            for i in 0..r {
                gram[i + i * r] += inv_sigma;
            }
            let factor = CholeskyFactor::factor(gram, r)?;
            if let Some(c) = cost.as_deref_mut() {
                c.flops((r * r * r) as f64 / 3.0);
            }
            let mut t = sub.apply_adjoint(rhs)?;
            factor.solve_in_place(t.as_slice_mut().expect("contiguous"));
            let expanded = sub.apply(&t)?;
            if let Some(c) = cost.as_deref_mut() {
                c.flops(2.0 * sub.apply_cost() + 2.0 * (r * r) as f64);
            }
            Ok(NewtonSolveOutcome {
                direction: rhs - &expanded,
                cg_iterations: 0,
                cg_converged: true,
            })
        }
        SolveStrategy::DirectCholesky => {
            let sub = op.column_submatrix(&sys.active)?;
            let mut v = vec![0.0; m * m];
            for i in 0..m {
                v[i + i * m] = 1.0;
            }
            accumulate_outer_products(&sub, sigma, &mut v);
            if let Some(c) = cost.as_deref_mut() {
                c.flops(outer_product_flops(&sub) + (m * m * m) as f64 / 3.0 + 2.0 * (m * m) as f64);
            }
            let factor = CholeskyFactor::factor(v, m)?;
            let mut d = rhs.clone();
            factor.solve_in_place(d.as_slice_mut().expect("contiguous"));
            Ok(NewtonSolveOutcome {
                direction: d,
                cg_iterations: 0,
                cg_converged: true,
            })
        }
        SolveStrategy::Cg => {
            let outcome = if op.supports_submatrix() {
                let sub = op.column_submatrix(&sys.active)?;
                let per_iter = 2.0 * sub.apply_cost();
                let out = linalg::conjugate_gradient(
                    |v, out| {
                        let vv = Array1::from_vec(v.to_vec());
                        let t = sub.apply_adjoint(&vv).expect("dims fixed");
                        let s = sub.apply(&t).expect("dims fixed");
                        for i in 0..m {
                            out[i] = v[i] + sigma * s[i];
                        }
                    },
                    rhs.as_slice().expect("contiguous"),
                    tol,
                    cfg.cg_max_iters,
                );
                if let Some(c) = cost.as_deref_mut() {
                    c.flops(out.iterations as f64 * per_iter);
                }
                out
            } else {
                // black-box route: V v = v + sigma A (mask .* (A* v))
                let mask: Vec<bool> = {
                    let mut mk = vec![false; op.cols()];
                    for j in sys.active.iter() {
                        mk[j] = true;
                    }
                    mk
                };
                let out = linalg::conjugate_gradient(
                    |v, out| {
                        let vv = Array1::from_vec(v.to_vec());
                        let mut t = op.apply_adjoint(&vv).expect("dims fixed");
                        for (tj, keep) in t.iter_mut().zip(&mask) {
                            if !*keep {
                                *tj = 0.0;
                            }
                        }
                        let s = op.apply(&t).expect("dims fixed");
                        for i in 0..m {
                            out[i] = v[i] + sigma * s[i];
                        }
                    },
                    rhs.as_slice().expect("contiguous"),
                    tol,
                    cfg.cg_max_iters,
                );
                if let Some(c) = cost.as_deref_mut() {
                    c.full_apply(2 * out.iterations as u64);
                }
                out
            };
            Ok(NewtonSolveOutcome {
                direction: Array1::from_vec(outcome.x),
                cg_iterations: outcome.iterations,
                cg_converged: outcome.converged,
            })
        }
    }
}

/// Adds `sigma * A_J A_J^T` to the column-major `m x m` buffer `v`
/// (full matrix, both triangles).
fn accumulate_outer_products(sub: &LinearOperator, sigma: f64, v: &mut [f64]) {
    let m = sub.rows();
    if let Some(d) = sub.dense_backend() {
        for j in 0..d.cols() {
            let col = d.column(j);
            for i2 in 0..m {
                let s = sigma * col[i2];
                if s != 0.0 {
                    let base = i2 * m;
                    for (i1, ci) in col.iter().enumerate() {
                        v[i1 + base] += s * ci;
                    }
                }
            }
        }
    } else if let Some(s) = sub.sparse_backend() {
        for j in 0..s.cols() {
            let entries: Vec<(usize, f64)> = s.column(j).collect();
            for &(i2, v2) in &entries {
                let base = i2 * m;
                for &(i1, v1) in &entries {
                    v[i1 + base] += sigma * v1 * v2;
                }
            }
        }
    } else {
        unreachable!("direct path requires an explicit backend");
    }
}

fn gram_flops(sub: &LinearOperator, r: usize) -> f64 {
    if let Some(s) = sub.sparse_backend() {
        2.0 * r as f64 * s.nnz() as f64
    } else {
        (r * r) as f64 * sub.rows() as f64
    }
}

fn outer_product_flops(sub: &LinearOperator) -> f64 {
    if let Some(s) = sub.sparse_backend() {
        let mut acc = 0.0;
        for j in 0..s.cols() {
            let nnz_j = (s.col_ptr()[j + 1] - s.col_ptr()[j]) as f64;
            acc += 2.0 * nnz_j * nnz_j;
        }
        acc
    } else {
        2.0 * (sub.rows() * sub.rows()) as f64 * sub.cols() as f64
    }
}
