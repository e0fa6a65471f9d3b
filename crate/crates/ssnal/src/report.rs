//! Solve reports, work accounting and the machine-readable record format.

use std::io::{BufRead, Write};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminationReason {
    Converged,
    IterationLimit,
    TimeLimit,
}

impl TerminationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationReason::Converged => "converged",
            TerminationReason::IterationLimit => "iteration-limit",
            TerminationReason::TimeLimit => "time-limit",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyCounts {
    pub smw: usize,
    pub cholesky: usize,
    pub cg: usize,
}

/// Outcome of one solver run.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solver: String,
    pub eta: f64,
    pub nnz: usize,
    pub objective: f64,
    /// Outer iterations for the augmented Lagrangian solver, main-loop
    /// iterations for the first-order baselines.
    pub iterations: usize,
    pub newton_steps: usize,
    pub cg_iterations: usize,
    pub strategies: StrategyCounts,
    /// Applications of the full problem operator (forward plus adjoint).
    pub matvecs: u64,
    /// All linear-algebra work, normalized to the flop cost of one full
    /// operator application. Includes reduced-system assembly and
    /// factorizations, so solvers with different inner algebra compare fairly.
    pub matvec_equiv: f64,
    pub primal_residual: Option<f64>,
    pub dual_residual: Option<f64>,
    pub wall: Duration,
    pub termination: TerminationReason,
    pub notes: Vec<String>,
}

impl SolveReport {
    pub fn converged(&self, tol: f64) -> bool {
        self.eta < tol
    }
}

/// Full solver output: the primal solution, the dual pair when the method
/// maintains one, and the report.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub x: ndarray::Array1<f64>,
    pub dual: Option<(ndarray::Array1<f64>, ndarray::Array1<f64>)>,
    pub report: SolveReport,
}

/// Flop accounting relative to the cost of one full operator application.
#[derive(Debug, Clone)]
pub(crate) struct Cost {
    flops: f64,
    full_applies: u64,
    full_apply_cost: f64,
}

impl Cost {
    pub fn new(full_apply_cost: f64) -> Self {
        Cost {
            flops: 0.0,
            full_applies: 0,
            full_apply_cost: full_apply_cost.max(1.0),
        }
    }

    /// One forward or adjoint application of the full problem operator.
    pub fn full_apply(&mut self, count: u64) {
        self.full_applies += count;
        self.flops += count as f64 * self.full_apply_cost;
    }

    /// Arbitrary linear-algebra work (submatrix products, factorizations).
    pub fn flops(&mut self, amount: f64) {
        self.flops += amount;
    }

    pub fn full_applies(&self) -> u64 {
        self.full_applies
    }

    pub fn matvec_equiv(&self) -> f64 {
        self.flops / self.full_apply_cost
    }
}

/// One machine-readable row per (problem, solver, lambda_c) cell; flat keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub probname: String,
    pub m: usize,
    pub n: usize,
    pub lambda_c: f64,
    pub lambda: f64,
    pub solver: String,
    pub eta: f64,
    pub nnz: usize,
    pub objective: f64,
    pub iterations: usize,
    pub newton_steps: usize,
    pub cg_iterations: usize,
    pub matvecs: u64,
    pub matvec_equiv: f64,
    pub wall_ns: u64,
    pub termination: TerminationReason,
    pub converged: bool,
}

pub fn write_records<W: Write>(mut w: W, records: &[Record]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::other)?;
        writeln!(w)?;
    }
    Ok(())
}

pub fn read_records<R: BufRead>(r: R) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for line in r.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(std::io::Error::other)?);
    }
    Ok(out)
}

/// Wall time in the benchmark-table format: seconds under a minute,
/// minutes:seconds under an hour, hours:minutes:seconds beyond. `"00"`
/// means under half a second.
pub fn format_wall(wall: Duration) -> String {
    let total = wall.as_secs_f64().round() as u64;
    let h = total / 3600;
    let m = (total % 3600) / 60;
    let s = total % 60;
    if h > 0 {
        format!("{h}:{m:02}:{s:02}")
    } else if m > 0 {
        format!("{m}:{s:02}")
    } else {
        format!("{s:02}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wall_format_matches_table_convention() {
        assert_eq!(format_wall(Duration::from_millis(300)), "00");
        assert_eq!(format_wall(Duration::from_millis(1400)), "01");
        assert_eq!(format_wall(Duration::from_secs(59)), "59");
        assert_eq!(format_wall(Duration::from_secs(61)), "1:01");
        assert_eq!(format_wall(Duration::from_secs(35 * 60 + 9)), "35:09");
        assert_eq!(format_wall(Duration::from_secs(3600 * 7 + 20)), "7:00:20");
    }

    #[test]
    fn records_round_trip() {
        let rec = Record {
            probname: "synth-m10-n20".into(),
            m: 10,
            n: 20,
            lambda_c: 1e-3,
            lambda: 0.5,
            solver: "ssnal".into(),
            eta: 3.2e-7,
            nnz: 4,
            objective: 1.25,
            iterations: 9,
            newton_steps: 17,
            cg_iterations: 0,
            matvecs: 60,
            matvec_equiv: 71.5,
            wall_ns: 1_234_567,
            termination: TerminationReason::Converged,
            converged: true,
        };
        let mut buf = Vec::new();
        write_records(&mut buf, std::slice::from_ref(&rec)).unwrap();
        let back = read_records(buf.as_slice()).unwrap();
        assert_eq!(back, vec![rec]);
    }

    #[test]
    fn cost_normalizes_to_full_applies() {
        let mut c = Cost::new(2000.0);
        c.full_apply(3);
        c.flops(1000.0);
        assert_eq!(c.full_applies(), 3);
        assert!((c.matvec_equiv() - 3.5).abs() < 1e-12);
    }
}
