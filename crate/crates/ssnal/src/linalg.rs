//! Internal dense kernels: Cholesky factorization, conjugate gradients and
//! power iteration. Matrices are column-major `Vec<f64>` buffers; every loop
//! runs in ascending index order so results are bit-reproducible.

use rand::Rng;

use crate::error::{Result, SsnalError};

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub(crate) struct CholeskyFactor {
    n: usize,
    /// Lower triangle, column-major; entries above the diagonal are stale.
    l: Vec<f64>,
}

impl CholeskyFactor {
    /// Factors a column-major symmetric matrix in place. Only the lower
    /// triangle of `a` is read.
    pub fn factor(mut a: Vec<f64>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        for j in 0..n {
            // columns 0..j are final; column j is updated against them
            let (done, rest) = a.split_at_mut(j * n);
            let col_j = &mut rest[..n];
            for k in 0..j {
                let ljk = done[j + k * n];
                if ljk != 0.0 {
                    let col_k = &done[k * n..(k + 1) * n];
                    for i in j..n {
                        col_j[i] -= col_k[i] * ljk;
                    }
                }
            }
            let d = col_j[j];
            if !(d > 0.0) || !d.is_finite() {
                return Err(SsnalError::CholeskyFailure { pivot: j });
            }
            let s = d.sqrt();
            for e in col_j[j..n].iter_mut() {
                *e /= s;
            }
        }
        Ok(CholeskyFactor { n, l: a })
    }

    /// Solves `L L^T x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        assert_eq!(x.len(), n);
        // forward: L y = b
        for j in 0..n {
            x[j] /= self.l[j + j * n];
            let xj = x[j];
            for i in (j + 1)..n {
                x[i] -= self.l[i + j * n] * xj;
            }
        }
        // backward: L^T x = y
        for j in (0..n).rev() {
            let mut acc = x[j];
            for i in (j + 1)..n {
                acc -= self.l[i + j * n] * x[i];
            }
            x[j] = acc / self.l[j + j * n];
        }
    }
}

pub(crate) struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub residual_norm: f64,
}

/// Conjugate gradients for a symmetric positive definite operator, started
/// from zero. Stops when the residual norm drops to `tol_abs`.
pub(crate) fn conjugate_gradient<F>(
    mut matvec: F,
    b: &[f64],
    tol_abs: f64,
    max_iters: usize,
) -> CgOutcome
where
    F: FnMut(&[f64], &mut [f64]),
{
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut rho = dot(&r, &r);
    if rho.sqrt() <= tol_abs {
        return CgOutcome {
            x,
            iterations: 0,
            converged: true,
            residual_norm: rho.sqrt(),
        };
    }
    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iters {
        matvec(&p, &mut ap);
        let denom = dot(&p, &ap);
        if denom <= 0.0 || !denom.is_finite() {
            break;
        }
        let alpha = rho / denom;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &ap, &mut r);
        iterations += 1;
        let rho_next = dot(&r, &r);
        if rho_next.sqrt() <= tol_abs {
            converged = true;
            rho = rho_next;
            break;
        }
        let beta = rho_next / rho;
        rho = rho_next;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + beta * *pi;
        }
    }
    CgOutcome {
        x,
        iterations,
        converged,
        residual_norm: rho.sqrt(),
    }
}

pub(crate) struct PowerOutcome {
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub achieved_rtol: f64,
}

/// Largest eigenvalue of a symmetric positive semidefinite operator by power
/// iteration with a seeded start vector.
pub(crate) fn power_iteration<F, R>(
    mut apply: F,
    dim: usize,
    rtol: f64,
    max_iters: usize,
    rng: &mut R,
) -> PowerOutcome
where
    F: FnMut(&[f64], &mut [f64]),
    R: Rng,
{
    let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let nv = norm2(&v);
    if nv == 0.0 {
        v[0] = 1.0;
    } else {
        v.iter_mut().for_each(|e| *e /= nv);
    }
    let mut w = vec![0.0; dim];
    let mut lambda = 0.0;
    let mut achieved = f64::INFINITY;
    for it in 1..=max_iters {
        apply(&v, &mut w);
        let next = dot(&v, &w);
        let nw = norm2(&w);
        if nw == 0.0 {
            // operator annihilates the iterate: eigenvalue 0
            return PowerOutcome {
                value: 0.0,
                iterations: it,
                converged: true,
                achieved_rtol: 0.0,
            };
        }
        achieved = (next - lambda).abs() / next.abs().max(f64::MIN_POSITIVE);
        lambda = next;
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
        if achieved <= rtol {
            return PowerOutcome {
                value: lambda,
                iterations: it,
                converged: true,
                achieved_rtol: achieved,
            };
        }
    }
    PowerOutcome {
        value: lambda,
        iterations: max_iters,
        converged: false,
        achieved_rtol: achieved,
    }
}

/// Fills a column-major `rows x cols` buffer with orthonormal columns
/// (modified Gram-Schmidt with one reorthogonalization pass).
pub(crate) fn orthonormal_columns<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Vec<f64> {
    assert!(cols <= rows);
    let mut q = vec![0.0; rows * cols];
    let normal = rand_distr::StandardNormal;
    for e in q.iter_mut() {
        *e = rng.sample::<f64, _>(normal);
    }
    for j in 0..cols {
        for _pass in 0..2 {
            for k in 0..j {
                let (a, b) = q.split_at_mut(j * rows);
                let qk = &a[k * rows..k * rows + rows];
                let qj = &mut b[..rows];
                let proj = dot(qk, qj);
                axpy(-proj, qk, qj);
            }
        }
        let col = &mut q[j * rows..(j + 1) * rows];
        let nrm = norm2(col);
        assert!(nrm > 1e-12, "degenerate random column");
        col.iter_mut().for_each(|e| *e /= nrm);
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        // B^T B + I with B random: SPD by construction
        let b: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() - 0.5).collect();
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += b[k + i * n] * b[k + j * n];
                }
                a[i + j * n] = acc + if i == j { 1.0 } else { 0.0 };
            }
        }
        a
    }

    #[test]
    fn cholesky_solves_spd_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1usize, 2, 5, 17] {
            let a = random_spd(n, &mut rng);
            let x_true: Vec<f64> = (0..n).map(|i| (i as f64) - 1.5).collect();
            let mut b = vec![0.0; n];
            for j in 0..n {
                for i in 0..n {
                    b[i] += a[i + j * n] * x_true[j];
                }
            }
            let f = CholeskyFactor::factor(a, n).unwrap();
            let mut x = b.clone();
            f.solve_in_place(&mut x);
            for (xi, ti) in x.iter().zip(&x_true) {
                assert!((xi - ti).abs() < 1e-9, "n={n}: {xi} vs {ti}");
            }
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        // [[1, 2], [2, 1]] has a negative eigenvalue
        let a = vec![1.0, 2.0, 2.0, 1.0];
        assert!(matches!(
            CholeskyFactor::factor(a, 2),
            Err(SsnalError::CholeskyFailure { pivot: 1 })
        ));
    }

    #[test]
    fn cg_matches_direct_solve() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 12;
        let a = random_spd(n, &mut rng);
        let b: Vec<f64> = (0..n).map(|i| ((i * 7 % 5) as f64) - 2.0).collect();
        let out = conjugate_gradient(
            |v, w| {
                for i in 0..n {
                    w[i] = 0.0;
                }
                for j in 0..n {
                    for i in 0..n {
                        w[i] += a[i + j * n] * v[j];
                    }
                }
            },
            &b,
            1e-12,
            200,
        );
        assert!(out.converged);
        let f = CholeskyFactor::factor(a, n).unwrap();
        let mut x = b.clone();
        f.solve_in_place(&mut x);
        for (ci, di) in out.x.iter().zip(&x) {
            assert!((ci - di).abs() < 1e-8);
        }
    }

    #[test]
    fn power_iteration_finds_top_eigenvalue() {
        // diagonal operator: eigenvalues 1..=n
        let n = 9;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = power_iteration(
            |v, w| {
                for i in 0..n {
                    w[i] = (i + 1) as f64 * v[i];
                }
            },
            n,
            1e-10,
            10_000,
            &mut rng,
        );
        assert!(out.converged);
        assert!((out.value - n as f64).abs() < 1e-6);
    }

    #[test]
    fn gram_schmidt_columns_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (rows, cols) = (40, 7);
        let q = orthonormal_columns(rows, cols, &mut rng);
        for i in 0..cols {
            for j in 0..cols {
                let d = dot(&q[i * rows..(i + 1) * rows], &q[j * rows..(j + 1) * rows]);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-12);
            }
        }
    }
}
