//! Proximal and conjugate kernels for the weighted l1 regularizer and the
//! squared loss, together with the optimality measurements used everywhere:
//! the relative KKT residual, the nonzero-count rule and the regularization
//! strength chosen as a fraction of `||A* b||_inf`.

use ndarray::Array1;

use crate::error::{Result, SsnalError};
use crate::operators::LinearOperator;
use crate::problem::LassoProblem;

/// Weights of the l1 regularizer: a uniform positive scalar or one positive
/// value per coordinate.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightedL1 {
    Uniform(f64),
    PerCoordinate(Array1<f64>),
}

impl WeightedL1 {
    pub fn uniform(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(SsnalError::InvalidArgument(format!(
                "l1 weight must be positive and finite, got {lambda}"
            )));
        }
        Ok(WeightedL1::Uniform(lambda))
    }

    pub fn per_coordinate(weights: Array1<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(SsnalError::InvalidArgument(
                "all l1 weights must be positive and finite".into(),
            ));
        }
        Ok(WeightedL1::PerCoordinate(weights))
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        match self {
            WeightedL1::Uniform(_) => Ok(()),
            WeightedL1::PerCoordinate(w) if w.len() == n => Ok(()),
            WeightedL1::PerCoordinate(w) => Err(SsnalError::dims(n, w.len(), "l1 weight vector")),
        }
    }

    #[inline]
    pub fn weight(&self, i: usize) -> f64 {
        match self {
            WeightedL1::Uniform(l) => *l,
            WeightedL1::PerCoordinate(w) => w[i],
        }
    }

    pub fn max_weight(&self) -> f64 {
        match self {
            WeightedL1::Uniform(l) => *l,
            WeightedL1::PerCoordinate(w) => w.iter().copied().fold(0.0, f64::max),
        }
    }

    /// `sum_i lambda_i |x_i|`
    pub fn l1_value(&self, x: &Array1<f64>) -> f64 {
        match self {
            WeightedL1::Uniform(l) => l * x.iter().map(|v| v.abs()).sum::<f64>(),
            WeightedL1::PerCoordinate(w) => {
                x.iter().zip(w.iter()).map(|(v, wi)| wi * v.abs()).sum()
            }
        }
    }
}

/// Coordinatewise shrinkage `sign(x) .* max(|x| - t, 0)` with `t = scale * lambda_i`.
pub fn soft_threshold_scaled(x: &Array1<f64>, lambda: &WeightedL1, scale: f64) -> Array1<f64> {
    assert!(scale > 0.0, "threshold scale must be positive");
    let mut out = x.clone();
    for (i, v) in out.iter_mut().enumerate() {
        let t = scale * lambda.weight(i);
        *v = if *v > t {
            *v - t
        } else if *v < -t {
            *v + t
        } else {
            0.0
        };
    }
    out
}

/// `Prox_{lambda ||.||_1}`: shrinkage at the unscaled weights.
pub fn soft_threshold(x: &Array1<f64>, lambda: &WeightedL1) -> Array1<f64> {
    soft_threshold_scaled(x, lambda, 1.0)
}

/// Projection onto the weighted sup-norm ball `{ z : |z_i| <= lambda_i }`,
/// the proximal mapping of the regularizer's conjugate.
pub fn project_linf_ball(z: &Array1<f64>, lambda: &WeightedL1) -> Array1<f64> {
    let mut out = z.clone();
    for (i, v) in out.iter_mut().enumerate() {
        let l = lambda.weight(i);
        *v = v.clamp(-l, l);
    }
    out
}

/// Squared loss `h(w) = 1/2 ||w - b||^2` through its conjugate:
/// `h*(y) = 1/2 ||y||^2 + <b, y>`, so the gradient of the conjugate is
/// `y + b` and its Hessian is the identity.
#[derive(Debug, Clone)]
pub struct SquaredLoss {
    b: Array1<f64>,
}

impl SquaredLoss {
    pub fn new(b: Array1<f64>) -> Result<Self> {
        if b.iter().any(|v| !v.is_finite()) {
            return Err(SsnalError::Validation("target contains non-finite entries".into()));
        }
        Ok(SquaredLoss { b })
    }

    pub fn target(&self) -> &Array1<f64> {
        &self.b
    }

    /// Strong-convexity modulus of the conjugate (the gradient of `h` is
    /// `1/alpha_h`-Lipschitz; both are 1 for the squared loss).
    pub fn alpha_h(&self) -> f64 {
        1.0
    }

    pub fn hstar_value(&self, y: &Array1<f64>) -> Result<f64> {
        if y.len() != self.b.len() {
            return Err(SsnalError::dims(self.b.len(), y.len(), "conjugate argument"));
        }
        Ok(0.5 * y.dot(y) + self.b.dot(y))
    }

    pub fn grad_hstar(&self, y: &Array1<f64>) -> Result<Array1<f64>> {
        if y.len() != self.b.len() {
            return Err(SsnalError::dims(self.b.len(), y.len(), "conjugate argument"));
        }
        Ok(y + &self.b)
    }
}

/// Relative KKT residual
/// `eta = ||x - Prox_lambda(x - A*(Ax - b) + c)|| / (1 + ||x|| + ||Ax - b||)`.
///
/// Zero exactly at optimality; scale-invariant in the iterate and residual.
pub fn kkt_residual(prob: &LassoProblem, x: &Array1<f64>) -> Result<f64> {
    if x.len() != prob.n() {
        return Err(SsnalError::dims(prob.n(), x.len(), "kkt_residual iterate"));
    }
    let resid = prob.operator().apply(x)? - prob.response();
    let mut inner = x - &prob.operator().apply_adjoint(&resid)?;
    prob.add_linear_term(&mut inner);
    let prox = soft_threshold(&inner, prob.lambda());
    let diff_norm = (x - &prox).mapv(|v| v * v).sum().sqrt();
    let denom = 1.0 + x.dot(x).sqrt() + resid.dot(&resid).sqrt();
    Ok(diff_norm / denom)
}

/// `lambda = lambda_c * ||A* b||_inf`.
///
/// `lambda_c` is normally in `(0, 1)`; values outside that interval are
/// accepted (the caller may warn) as long as the result is positive.
pub fn lambda_from_ratio(op: &LinearOperator, b: &Array1<f64>, lambda_c: f64) -> Result<f64> {
    if !(lambda_c > 0.0) || !lambda_c.is_finite() {
        return Err(SsnalError::InvalidArgument(format!(
            "lambda_c must be positive, got {lambda_c}"
        )));
    }
    let atb = op.apply_adjoint(b)?;
    let max_abs = atb.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max_abs == 0.0 {
        return Err(SsnalError::InvalidArgument(
            "A* b is zero; the regularization strength is undefined".into(),
        ));
    }
    Ok(lambda_c * max_abs)
}

/// Number of entries needed to capture 99.9% of the l1 mass:
/// the smallest `k` with `sum of the k largest |x_i| >= 0.999 ||x||_1`.
pub fn estimate_nnz(x: &Array1<f64>) -> usize {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    // stable sort: ties keep index order
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let total: f64 = mags.iter().sum();
    if total == 0.0 {
        return 0;
    }
    let target = 0.999 * total;
    let mut acc = 0.0;
    for (k, v) in mags.iter().enumerate() {
        acc += v;
        if acc >= target {
            return k + 1;
        }
    }
    mags.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::DenseMatrix;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform(l: f64) -> WeightedL1 {
        WeightedL1::uniform(l).unwrap()
    }

    #[test]
    fn soft_threshold_formula_cases() {
        let x = array![3.0, -0.5, 1.0];
        assert_eq!(soft_threshold(&x, &uniform(1.0)), array![2.0, 0.0, 0.0]);

        let zero = Array1::<f64>::zeros(4);
        assert_eq!(soft_threshold(&zero, &uniform(2.0)), zero);

        let x = array![1.5, -2.25, 0.0, 1e-3];
        let tiny = soft_threshold(&x, &uniform(1e-300));
        for (a, b) in tiny.iter().zip(x.iter()) {
            assert!((a - b).abs() <= f64::EPSILON * b.abs());
        }
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(WeightedL1::uniform(0.0).is_err());
        assert!(WeightedL1::uniform(-1.0).is_err());
        assert!(WeightedL1::per_coordinate(array![1.0, 0.0]).is_err());
    }

    #[test]
    fn projection_clamps_and_is_idempotent() {
        let lam = uniform(1.0);
        assert_eq!(project_linf_ball(&array![2.0, -0.3], &lam), array![1.0, -0.3]);
        let inside = array![0.9, -0.8, 0.0];
        assert_eq!(project_linf_ball(&inside, &lam), inside);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let z = Array1::from_iter((0..6).map(|_| 4.0 * (rng.random::<f64>() - 0.5)));
            let p = project_linf_ball(&z, &lam);
            assert_eq!(project_linf_ball(&p, &lam), p);
        }
    }

    #[test]
    fn moreau_identity_numerically() {
        // x = Prox_{t p}(x) + t Prox_{p*/t}(x/t) for p = weighted l1
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let weights =
            WeightedL1::per_coordinate(Array1::from_iter((0..8).map(|_| 0.2 + rng.random::<f64>())))
                .unwrap();
        for &t in &[0.1, 1.0, 2.5, 10.0] {
            for _ in 0..100 {
                let x = Array1::from_iter((0..8).map(|_| 6.0 * (rng.random::<f64>() - 0.5)));
                let s = soft_threshold_scaled(&x, &weights, t);
                let p = project_linf_ball(&(&x / t), &weights);
                let recon = &s + &(p * t);
                for (a, b) in recon.iter().zip(x.iter()) {
                    assert!((a - b).abs() < 1e-13, "t={t}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn soft_threshold_is_nonexpansive() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let lam = uniform(0.7);
        for _ in 0..200 {
            let x = Array1::from_iter((0..10).map(|_| 4.0 * (rng.random::<f64>() - 0.5)));
            let y = Array1::from_iter((0..10).map(|_| 4.0 * (rng.random::<f64>() - 0.5)));
            let dx = soft_threshold(&x, &lam) - soft_threshold(&y, &lam);
            let dxy = &x - &y;
            assert!(dx.dot(&dx).sqrt() <= dxy.dot(&dxy).sqrt() + 1e-14);
        }
    }

    #[test]
    fn grad_hstar_cases_and_finite_differences() {
        let b = array![1.0, -2.0, 0.5];
        let loss = SquaredLoss::new(b.clone()).unwrap();
        assert_eq!(loss.grad_hstar(&Array1::zeros(3)).unwrap(), b);
        let minus_b = -b.clone();
        assert_eq!(loss.grad_hstar(&minus_b).unwrap(), Array1::zeros(3));

        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let y = Array1::from_iter((0..3).map(|_| 2.0 * (rng.random::<f64>() - 0.5)));
        let g = loss.grad_hstar(&y).unwrap();
        let h = 1e-5;
        for i in 0..3 {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[i] += h;
            ym[i] -= h;
            let fd =
                (loss.hstar_value(&yp).unwrap() - loss.hstar_value(&ym).unwrap()) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6);
        }
    }

    fn identity_problem(b: Array1<f64>, lambda: f64) -> LassoProblem {
        LassoProblem::new(
            LinearOperator::identity(b.len()),
            b,
            WeightedL1::uniform(lambda).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn kkt_residual_identity_cases() {
        let prob = identity_problem(array![2.0, 0.5], 1.0);
        // exact soft-threshold solution
        let eta = kkt_residual(&prob, &array![1.0, 0.0]).unwrap();
        assert!(eta <= 1e-15);

        // hand evaluation at x = 0: ||soft(b, 1)|| / (1 + ||b||)
        let eta0 = kkt_residual(&prob, &Array1::zeros(2)).unwrap();
        let want = 1.0 / (1.0 + (4.25f64).sqrt());
        assert!((eta0 - want).abs() < 1e-15);
    }

    #[test]
    fn kkt_residual_zero_problem() {
        let prob = identity_problem(Array1::zeros(2), 1.0);
        assert_eq!(kkt_residual(&prob, &Array1::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn kkt_residual_invariant_under_zero_padding() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = 5;
        let n = 7;
        let data: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>() - 0.5).collect();
        let b = Array1::from_iter((0..m).map(|_| rng.random::<f64>() - 0.5));
        let x = Array1::from_iter((0..n).map(|_| rng.random::<f64>() - 0.5));

        let a = DenseMatrix::from_column_major(m, n, data.clone());
        let prob = LassoProblem::new(LinearOperator::dense(a), b.clone(), uniform(0.3)).unwrap();
        let eta = kkt_residual(&prob, &x).unwrap();

        // append two zero columns and two zero coordinates
        let mut padded = data;
        padded.extend(std::iter::repeat(0.0).take(2 * m));
        let a_pad = DenseMatrix::from_column_major(m, n + 2, padded);
        let prob_pad = LassoProblem::new(LinearOperator::dense(a_pad), b, uniform(0.3)).unwrap();
        let mut x_pad = x.to_vec();
        x_pad.extend([0.0, 0.0]);
        let eta_pad = kkt_residual(&prob_pad, &Array1::from_vec(x_pad)).unwrap();
        assert!((eta - eta_pad).abs() < 1e-15);
    }

    #[test]
    fn lambda_ratio_cases() {
        let op = LinearOperator::identity(2);
        let b = array![2.0, -3.0];
        let l = lambda_from_ratio(&op, &b, 0.1).unwrap();
        assert!((l - 0.3).abs() < 1e-15);

        // boundary lambda_c = 1: zero is optimal
        let l1 = lambda_from_ratio(&op, &b, 1.0).unwrap();
        let prob = LassoProblem::new(op, b, WeightedL1::uniform(l1).unwrap()).unwrap();
        assert!(kkt_residual(&prob, &Array1::zeros(2)).unwrap() <= 1e-12);

        let zero_op = LinearOperator::dense(DenseMatrix::zeros(2, 2));
        assert!(lambda_from_ratio(&zero_op, &array![1.0, 1.0], 0.5).is_err());
    }

    #[test]
    fn lambda_ratio_matches_naive_computation() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (m, n) = (10, 20);
        let data: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>() - 0.5).collect();
        let b = Array1::from_iter((0..m).map(|_| rng.random::<f64>() - 0.5));
        let mut naive = 0.0f64;
        for j in 0..n {
            let mut acc = 0.0;
            for i in 0..m {
                acc += data[i + j * m] * b[i];
            }
            naive = naive.max(acc.abs());
        }
        let op = LinearOperator::dense(DenseMatrix::from_column_major(m, n, data));
        let got = lambda_from_ratio(&op, &b, 0.37).unwrap();
        assert!((got - 0.37 * naive).abs() < 1e-14 * naive.max(1.0));
    }

    #[test]
    fn nnz_rule_cases() {
        assert_eq!(estimate_nnz(&array![5.0, 0.0, 0.0]), 1);
        assert_eq!(estimate_nnz(&Array1::zeros(3)), 0);
        // ties: 0.999 * 4 = 3.996 > 3, so all four count
        assert_eq!(estimate_nnz(&array![1.0, 1.0, 1.0, 1.0]), 4);
    }

    #[test]
    fn nnz_bounded_by_support_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let x = Array1::from_iter((0..12).map(|_| {
                if rng.random::<f64>() < 0.4 {
                    0.0
                } else {
                    rng.random::<f64>() - 0.5
                }
            }));
            let support = x.iter().filter(|v| **v != 0.0).count();
            assert!(estimate_nnz(&x) <= support);
        }
    }
}
