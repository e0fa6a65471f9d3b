//! Lasso problem container: `min 1/2 ||Ax - b||^2 - <c, x> + sum_i lambda_i |x_i|`.
//!
//! The linear term `c` defaults to zero, which recovers the plain lasso
//! objective. Weights may be a uniform scalar or one positive value per
//! coordinate.

use ndarray::Array1;

use crate::error::{Result, SsnalError};
use crate::operators::LinearOperator;
use crate::prox::WeightedL1;

#[derive(Debug, Clone)]
pub struct LassoProblem {
    op: LinearOperator,
    b: Array1<f64>,
    lambda: WeightedL1,
    c: Option<Array1<f64>>,
}

impl LassoProblem {
    pub fn new(op: LinearOperator, b: Array1<f64>, lambda: WeightedL1) -> Result<Self> {
        Self::with_linear_term(op, b, lambda, None)
    }

    pub fn with_linear_term(
        op: LinearOperator,
        b: Array1<f64>,
        lambda: WeightedL1,
        c: Option<Array1<f64>>,
    ) -> Result<Self> {
        if op.rows() == 0 || op.cols() == 0 {
            return Err(SsnalError::Validation(format!(
                "degenerate operator shape {}x{}",
                op.rows(),
                op.cols()
            )));
        }
        if b.len() != op.rows() {
            return Err(SsnalError::dims(op.rows(), b.len(), "response vector"));
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(SsnalError::Validation("response contains non-finite entries".into()));
        }
        lambda.validate(op.cols())?;
        if let Some(cv) = &c {
            if cv.len() != op.cols() {
                return Err(SsnalError::dims(op.cols(), cv.len(), "linear term"));
            }
            if cv.iter().any(|v| !v.is_finite()) {
                return Err(SsnalError::Validation("linear term contains non-finite entries".into()));
            }
        }
        Ok(LassoProblem { op, b, lambda, c })
    }

    pub fn m(&self) -> usize {
        self.op.rows()
    }

    pub fn n(&self) -> usize {
        self.op.cols()
    }

    pub fn operator(&self) -> &LinearOperator {
        &self.op
    }

    pub fn response(&self) -> &Array1<f64> {
        &self.b
    }

    pub fn lambda(&self) -> &WeightedL1 {
        &self.lambda
    }

    pub fn linear_term(&self) -> Option<&Array1<f64>> {
        self.c.as_ref()
    }

    /// Adds `c` to `v` in place; no-op when the linear term is zero.
    pub(crate) fn add_linear_term(&self, v: &mut Array1<f64>) {
        if let Some(c) = &self.c {
            *v += c;
        }
    }

    /// `1/2 ||Ax - b||^2 - <c, x> + sum_i lambda_i |x_i|`
    pub fn objective(&self, x: &Array1<f64>) -> Result<f64> {
        let r = self.op.apply(x)? - &self.b;
        let mut val = 0.5 * r.dot(&r) + self.lambda.l1_value(x);
        if let Some(c) = &self.c {
            val -= c.dot(x);
        }
        Ok(val)
    }
}
