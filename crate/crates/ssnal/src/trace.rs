//! Per-iteration trace records, emitted through a sink the caller provides.

use crate::ssn::SolveStrategy;

/// One outer (augmented Lagrangian) iteration.
#[derive(Debug, Clone)]
pub struct OuterTrace {
    pub k: usize,
    pub eta: f64,
    /// `||A* y + z - c||`
    pub primal_feasibility: f64,
    pub sigma: f64,
    pub inner_steps: usize,
}

/// One inner Newton step.
#[derive(Debug, Clone)]
pub struct InnerTrace {
    pub step: usize,
    pub grad_norm: f64,
    pub active_size: usize,
    pub strategy: SolveStrategy,
    pub cg_iterations: usize,
    pub step_size: f64,
}

/// One baseline iteration (emitted at the stopping-check cadence).
#[derive(Debug, Clone)]
pub struct BaselineTrace {
    pub iteration: usize,
    pub eta: f64,
}

pub trait TraceSink {
    fn on_outer(&mut self, _t: &OuterTrace) {}
    fn on_inner(&mut self, _t: &InnerTrace) {}
    fn on_baseline(&mut self, _t: &BaselineTrace) {}
}

/// Sink that drops everything.
pub struct NoTrace;

impl TraceSink for NoTrace {}
