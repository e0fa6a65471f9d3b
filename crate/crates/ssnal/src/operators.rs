//! Linear-map abstraction the solvers are written against.
//!
//! An operator is `m x n` with one of three backends:
//!
//! * dense column-major storage,
//! * compressed sparse column storage, or
//! * a black-box forward/adjoint pair.
//!
//! Column subselection (`column_submatrix`, `gram_submatrix`) is the hot
//! primitive behind the reduced Newton systems; it is defined for the dense
//! and sparse backends only. Black-box operators support `apply` and
//! `apply_adjoint` and report no-submatrix capability.
//!
//! Operators are immutable after construction and safe to share across
//! threads. Matrix-vector products accumulate sequentially in ascending
//! column order, so results are reproducible bit for bit.

use std::fmt;
use std::sync::Arc;

use ndarray::Array1;

use crate::error::{Result, SsnalError};

/// Dense matrix in column-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_column_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut data = vec![0.0; m * n];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                data[i + j * m] = *v;
            }
        }
        DenseMatrix {
            rows: m,
            cols: n,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i + i * n] = 1.0;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i + j * self.rows]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i + j * self.rows] = v;
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn into_data(self) -> Vec<f64> {
        self.data
    }
}

/// Sparse matrix in compressed sparse column layout. Row indices are strictly
/// ascending within each column.
#[derive(Debug, Clone, PartialEq)]
pub struct CscMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl CscMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        col_ptr: Vec<usize>,
        row_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if col_ptr.len() != cols + 1 || col_ptr[0] != 0 || *col_ptr.last().unwrap() != values.len()
        {
            return Err(SsnalError::Validation("malformed CSC column pointers".into()));
        }
        if row_idx.len() != values.len() {
            return Err(SsnalError::Validation(
                "CSC row index and value lengths differ".into(),
            ));
        }
        for j in 0..cols {
            if col_ptr[j] > col_ptr[j + 1] {
                return Err(SsnalError::Validation("CSC column pointers decrease".into()));
            }
            let mut last: Option<usize> = None;
            for &i in &row_idx[col_ptr[j]..col_ptr[j + 1]] {
                if i >= rows {
                    return Err(SsnalError::IndexOutOfRange { index: i, dim: rows });
                }
                if let Some(prev) = last {
                    if i <= prev {
                        return Err(SsnalError::Validation(format!(
                            "row indices not strictly ascending in column {j}"
                        )));
                    }
                }
                last = Some(i);
            }
        }
        Ok(CscMatrix {
            rows,
            cols,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Builds from (row, col, value) triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        for &(i, j, _) in &triplets {
            if i >= rows {
                return Err(SsnalError::IndexOutOfRange { index: i, dim: rows });
            }
            if j >= cols {
                return Err(SsnalError::IndexOutOfRange { index: j, dim: cols });
            }
        }
        triplets.sort_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let mut col_ptr = vec![0usize; cols + 1];
        let mut row_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in triplets {
            if last == Some((j, i)) {
                *values.last_mut().unwrap() += v;
            } else {
                row_idx.push(i);
                values.push(v);
                col_ptr[j + 1] += 1;
                last = Some((j, i));
            }
        }
        for j in 0..cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        CscMatrix::new(rows, cols, col_ptr, row_idx, values)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn col_ptr(&self) -> &[usize] {
        &self.col_ptr
    }

    pub fn row_indices(&self) -> &[usize] {
        &self.row_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Iterates the `(row, value)` entries of column `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.col_ptr[j]..self.col_ptr[j + 1];
        self.row_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn column_norm(&self, j: usize) -> f64 {
        let span = self.col_ptr[j]..self.col_ptr[j + 1];
        self.values[span].iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.rows, self.cols);
        for j in 0..self.cols {
            for (i, v) in self.column(j) {
                d.set(i, j, v);
            }
        }
        d
    }
}

type ApplyFn = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;

/// Forward/adjoint closure pair for operators without an explicit matrix.
#[derive(Clone)]
pub struct BlackBoxPair {
    forward: ApplyFn,
    adjoint: ApplyFn,
}

impl fmt::Debug for BlackBoxPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BlackBoxPair {{ .. }}")
    }
}

#[derive(Debug, Clone)]
enum Backend {
    Dense(DenseMatrix),
    Sparse(CscMatrix),
    BlackBox(BlackBoxPair),
}

/// `m x n` linear map with explicit or black-box storage.
#[derive(Debug, Clone)]
pub struct LinearOperator {
    m: usize,
    n: usize,
    backend: Backend,
}

/// Sorted, duplicate-free set of column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Sorts and deduplicates `indices`; every index must be below `dim`.
    pub fn new(mut indices: Vec<usize>, dim: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(SsnalError::IndexOutOfRange {
                    index: last,
                    dim,
                });
            }
        }
        Ok(IndexSet { indices })
    }

    pub fn empty() -> Self {
        IndexSet { indices: Vec::new() }
    }

    pub fn all(dim: usize) -> Self {
        IndexSet {
            indices: (0..dim).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }
}

impl LinearOperator {
    pub fn dense(matrix: DenseMatrix) -> Self {
        LinearOperator {
            m: matrix.rows(),
            n: matrix.cols(),
            backend: Backend::Dense(matrix),
        }
    }

    pub fn sparse(matrix: CscMatrix) -> Self {
        LinearOperator {
            m: matrix.rows(),
            n: matrix.cols(),
            backend: Backend::Sparse(matrix),
        }
    }

    /// Wraps a forward/adjoint closure pair. `forward` maps length-`n` input
    /// to length-`m` output; `adjoint` the reverse.
    pub fn black_box<F, G>(m: usize, n: usize, forward: F, adjoint: G) -> Self
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
        G: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        LinearOperator {
            m,
            n,
            backend: Backend::BlackBox(BlackBoxPair {
                forward: Arc::new(forward),
                adjoint: Arc::new(adjoint),
            }),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::dense(DenseMatrix::identity(n))
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn is_black_box(&self) -> bool {
        matches!(self.backend, Backend::BlackBox(_))
    }

    /// Column subselection is available for the dense and sparse backends.
    pub fn supports_submatrix(&self) -> bool {
        !self.is_black_box()
    }

    /// Estimated flop cost of one `apply`/`apply_adjoint` call.
    pub fn apply_cost(&self) -> f64 {
        match &self.backend {
            Backend::Dense(_) => 2.0 * self.m as f64 * self.n as f64,
            Backend::Sparse(s) => 2.0 * s.nnz() as f64,
            // nominal full-density cost: the true cost is unknowable
            Backend::BlackBox(_) => 2.0 * self.m as f64 * self.n as f64,
        }
    }

    /// `y = A x`.
    pub fn apply(&self, x: &Array1<f64>) -> Result<Array1<f64>> {
        if x.len() != self.n {
            return Err(SsnalError::dims(self.n, x.len(), "apply input"));
        }
        let xs = x.as_slice().expect("contiguous");
        let mut y = vec![0.0; self.m];
        match &self.backend {
            Backend::Dense(d) => {
                for j in 0..self.n {
                    let xj = xs[j];
                    if xj != 0.0 {
                        crate::linalg::axpy(xj, d.column(j), &mut y);
                    }
                }
            }
            Backend::Sparse(s) => {
                for j in 0..self.n {
                    let xj = xs[j];
                    if xj != 0.0 {
                        for (i, v) in s.column(j) {
                            y[i] += v * xj;
                        }
                    }
                }
            }
            Backend::BlackBox(bb) => (bb.forward)(xs, &mut y),
        }
        Ok(Array1::from_vec(y))
    }

    /// `x = A* y`.
    pub fn apply_adjoint(&self, y: &Array1<f64>) -> Result<Array1<f64>> {
        if y.len() != self.m {
            return Err(SsnalError::dims(self.m, y.len(), "apply_adjoint input"));
        }
        let ys = y.as_slice().expect("contiguous");
        let mut x = vec![0.0; self.n];
        match &self.backend {
            Backend::Dense(d) => {
                for j in 0..self.n {
                    x[j] = crate::linalg::dot(d.column(j), ys);
                }
            }
            Backend::Sparse(s) => {
                for j in 0..self.n {
                    let mut acc = 0.0;
                    for (i, v) in s.column(j) {
                        acc += v * ys[i];
                    }
                    x[j] = acc;
                }
            }
            Backend::BlackBox(bb) => (bb.adjoint)(ys, &mut x),
        }
        Ok(Array1::from_vec(x))
    }

    /// Extracts the `m x r` operator made of the columns indexed by `set`,
    /// preserving the backend kind.
    pub fn column_submatrix(&self, set: &IndexSet) -> Result<LinearOperator> {
        if let Some(&last) = set.as_slice().last() {
            if last >= self.n {
                return Err(SsnalError::IndexOutOfRange {
                    index: last,
                    dim: self.n,
                });
            }
        }
        match &self.backend {
            Backend::Dense(d) => {
                let mut data = Vec::with_capacity(self.m * set.len());
                for j in set.iter() {
                    data.extend_from_slice(d.column(j));
                }
                Ok(LinearOperator::dense(DenseMatrix::from_column_major(
                    self.m,
                    set.len(),
                    data,
                )))
            }
            Backend::Sparse(s) => {
                let mut col_ptr = Vec::with_capacity(set.len() + 1);
                col_ptr.push(0usize);
                let mut row_idx = Vec::new();
                let mut values = Vec::new();
                for j in set.iter() {
                    let span = s.col_ptr[j]..s.col_ptr[j + 1];
                    row_idx.extend_from_slice(&s.row_idx[span.clone()]);
                    values.extend_from_slice(&s.values[span]);
                    col_ptr.push(row_idx.len());
                }
                Ok(LinearOperator::sparse(CscMatrix {
                    rows: self.m,
                    cols: set.len(),
                    col_ptr,
                    row_idx,
                    values,
                }))
            }
            Backend::BlackBox(_) => Err(SsnalError::Capability(
                "column_submatrix on a black-box operator",
            )),
        }
    }

    /// Gram matrix `A_J^T A_J` of the selected columns (symmetric positive
    /// semidefinite, r x r, column-major).
    pub fn gram_submatrix(&self, set: &IndexSet) -> Result<DenseMatrix> {
        if set.is_empty() {
            return Err(SsnalError::InvalidArgument(
                "gram_submatrix of an empty index set".into(),
            ));
        }
        let sub = self.column_submatrix(set)?;
        let r = set.len();
        let mut g = vec![0.0; r * r];
        match &sub.backend {
            Backend::Dense(d) => {
                for a in 0..r {
                    for b in a..r {
                        let v = crate::linalg::dot(d.column(a), d.column(b));
                        g[a + b * r] = v;
                        g[b + a * r] = v;
                    }
                }
            }
            Backend::Sparse(s) => {
                for a in 0..r {
                    for b in a..r {
                        let v = sparse_col_dot(s, a, b);
                        g[a + b * r] = v;
                        g[b + a * r] = v;
                    }
                }
            }
            Backend::BlackBox(_) => unreachable!("submatrix preserves explicit backends"),
        }
        Ok(DenseMatrix::from_column_major(r, r, g))
    }

    pub(crate) fn dense_backend(&self) -> Option<&DenseMatrix> {
        match &self.backend {
            Backend::Dense(d) => Some(d),
            _ => None,
        }
    }

    pub(crate) fn sparse_backend(&self) -> Option<&CscMatrix> {
        match &self.backend {
            Backend::Sparse(s) => Some(s),
            _ => None,
        }
    }

    /// Squared Frobenius norm; unavailable for black-box operators.
    pub fn frobenius_norm_sq(&self) -> Option<f64> {
        match &self.backend {
            Backend::Dense(d) => Some(d.as_slice().iter().map(|v| v * v).sum()),
            Backend::Sparse(s) => Some(s.values().iter().map(|v| v * v).sum()),
            Backend::BlackBox(_) => None,
        }
    }

    /// Euclidean norm of column `j`; unavailable for black-box operators.
    pub fn column_norm(&self, j: usize) -> Option<f64> {
        match &self.backend {
            Backend::Dense(d) => Some(crate::linalg::norm2(d.column(j))),
            Backend::Sparse(s) => Some(s.column_norm(j)),
            Backend::BlackBox(_) => None,
        }
    }
}

fn sparse_col_dot(s: &CscMatrix, a: usize, b: usize) -> f64 {
    let mut ia = s.col_ptr[a];
    let ea = s.col_ptr[a + 1];
    let mut ib = s.col_ptr[b];
    let eb = s.col_ptr[b + 1];
    let mut acc = 0.0;
    while ia < ea && ib < eb {
        let ra = s.row_idx[ia];
        let rb = s.row_idx[ib];
        if ra == rb {
            acc += s.values[ia] * s.values[ib];
            ia += 1;
            ib += 1;
        } else if ra < rb {
            ia += 1;
        } else {
            ib += 1;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dense(m: usize, n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
        let data = (0..m * n).map(|_| rng.random::<f64>() - 0.5).collect();
        DenseMatrix::from_column_major(m, n, data)
    }

    fn random_sparse(m: usize, n: usize, density: f64, rng: &mut ChaCha8Rng) -> CscMatrix {
        let mut triplets = Vec::new();
        for j in 0..n {
            for i in 0..m {
                if rng.random::<f64>() < density {
                    triplets.push((i, j, rng.random::<f64>() - 0.5));
                }
            }
        }
        CscMatrix::from_triplets(m, n, triplets).unwrap()
    }

    #[test]
    fn apply_identity_and_zero() {
        let id = LinearOperator::identity(2);
        let x = array![3.0, 4.0];
        assert_eq!(id.apply(&x).unwrap(), x);

        let zero = LinearOperator::dense(DenseMatrix::zeros(3, 2));
        assert_eq!(zero.apply(&x).unwrap(), Array1::zeros(3));
    }

    #[test]
    fn apply_dense_direct() {
        // [[1, 2], [3, 4]] as rows
        let a = LinearOperator::dense(DenseMatrix::from_rows(vec![
            vec![1.0, 2.0],
            vec![3.0, 4.0],
        ]));
        assert_eq!(a.apply(&array![1.0, 1.0]).unwrap(), array![3.0, 7.0]);
        assert_eq!(a.apply_adjoint(&array![1.0, 0.0]).unwrap(), array![1.0, 2.0]);
        assert_eq!(
            LinearOperator::identity(2)
                .apply_adjoint(&array![1.0, 2.0])
                .unwrap(),
            array![1.0, 2.0]
        );
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let a = LinearOperator::dense(DenseMatrix::zeros(3, 2));
        assert!(a.apply(&array![1.0, 2.0, 3.0]).is_err());
        assert!(a.apply_adjoint(&array![1.0, 2.0]).is_err());
    }

    #[test]
    fn adjoint_consistency_dense_and_sparse() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let (m, n) = (20, 30);
        let ops = [
            LinearOperator::dense(random_dense(m, n, &mut rng)),
            LinearOperator::sparse(random_sparse(m, n, 0.3, &mut rng)),
        ];
        for op in &ops {
            for _ in 0..20 {
                let u = Array1::from_iter((0..n).map(|_| rng.random::<f64>() - 0.5));
                let v = Array1::from_iter((0..m).map(|_| rng.random::<f64>() - 0.5));
                let lhs = op.apply(&u).unwrap().dot(&v);
                let rhs = u.dot(&op.apply_adjoint(&v).unwrap());
                let scale = lhs.abs().max(rhs.abs()).max(1.0);
                assert!((lhs - rhs).abs() / scale < 1e-12);
            }
        }
    }

    #[test]
    fn submatrix_full_empty_and_selected() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let d = random_dense(3, 5, &mut rng);
        let op = LinearOperator::dense(d.clone());

        let full = op.column_submatrix(&IndexSet::all(5)).unwrap();
        assert_eq!(full.dense_backend().unwrap(), &d);

        let empty = op.column_submatrix(&IndexSet::empty()).unwrap();
        assert_eq!(empty.cols(), 0);
        assert_eq!(
            empty.apply(&Array1::zeros(0)).unwrap(),
            Array1::<f64>::zeros(3)
        );

        let set = IndexSet::new(vec![1, 3], 5).unwrap();
        let sub = op.column_submatrix(&set).unwrap();
        for i in 0..3 {
            assert_eq!(sub.dense_backend().unwrap().get(i, 0), d.get(i, 1));
            assert_eq!(sub.dense_backend().unwrap().get(i, 1), d.get(i, 3));
        }
    }

    #[test]
    fn sparse_submatrix_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let s = random_sparse(8, 12, 0.4, &mut rng);
        let dense = s.to_dense();
        let op = LinearOperator::sparse(s);
        let set = IndexSet::new(vec![0, 5, 5, 11, 2], 12).unwrap();
        assert_eq!(set.as_slice(), &[0, 2, 5, 11]);
        let sub = op.column_submatrix(&set).unwrap();
        let sub_dense = sub.sparse_backend().unwrap().to_dense();
        for (k, j) in set.iter().enumerate() {
            for i in 0..8 {
                assert_eq!(sub_dense.get(i, k), dense.get(i, j));
            }
        }
    }

    #[test]
    fn submatrix_scatter_identity() {
        // A_J u == A (scatter of u into the J positions)
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..10 {
            let op = LinearOperator::dense(random_dense(7, 11, &mut rng));
            let set = IndexSet::new(vec![0, 3, 4, 9], 11).unwrap();
            let sub = op.column_submatrix(&set).unwrap();
            let u = Array1::from_iter((0..4).map(|_| rng.random::<f64>() - 0.5));
            let mut scattered = Array1::zeros(11);
            for (k, j) in set.iter().enumerate() {
                scattered[j] = u[k];
            }
            let lhs = sub.apply(&u).unwrap();
            let rhs = op.apply(&scattered).unwrap();
            for (a, b) in lhs.iter().zip(rhs.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_unit_and_orthonormal_columns() {
        let single = LinearOperator::dense(DenseMatrix::from_rows(vec![
            vec![0.6],
            vec![0.8],
        ]));
        let g = single
            .gram_submatrix(&IndexSet::new(vec![0], 1).unwrap())
            .unwrap();
        assert!((g.get(0, 0) - 1.0).abs() < 1e-15);

        let ortho = LinearOperator::identity(4);
        let set = IndexSet::new(vec![0, 2], 4).unwrap();
        let g = ortho.gram_submatrix(&set).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert_eq!(g.get(a, b), want);
            }
        }
    }

    #[test]
    fn gram_matches_naive_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let d = random_dense(10, 4, &mut rng);
        let op = LinearOperator::dense(d.clone());
        let set = IndexSet::all(4);
        let g = op.gram_submatrix(&set).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let mut want = 0.0;
                for i in 0..10 {
                    want += d.get(i, a) * d.get(i, b);
                }
                assert!((g.get(a, b) - want).abs() < 1e-12);
            }
        }
        // sparse backend agrees with its densified version
        let s = random_sparse(10, 4, 0.5, &mut rng);
        let sop = LinearOperator::sparse(s.clone());
        let gs = sop.gram_submatrix(&set).unwrap();
        let sd = s.to_dense();
        for a in 0..4 {
            for b in 0..4 {
                let mut want = 0.0;
                for i in 0..10 {
                    want += sd.get(i, a) * sd.get(i, b);
                }
                assert!((gs.get(a, b) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gram_empty_set_rejected() {
        let op = LinearOperator::identity(3);
        assert!(op.gram_submatrix(&IndexSet::empty()).is_err());
    }

    #[test]
    fn black_box_supports_apply_only() {
        let d = DenseMatrix::from_rows(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let da = d.clone();
        let db = d.clone();
        let op = LinearOperator::black_box(
            2,
            2,
            move |x, y| {
                for i in 0..2 {
                    y[i] = (0..2).map(|j| da.get(i, j) * x[j]).sum();
                }
            },
            move |y, x| {
                for j in 0..2 {
                    x[j] = (0..2).map(|i| db.get(i, j) * y[i]).sum();
                }
            },
        );
        assert!(!op.supports_submatrix());
        assert_eq!(op.apply(&array![1.0, 1.0]).unwrap(), array![3.0, 7.0]);
        assert!(matches!(
            op.column_submatrix(&IndexSet::empty()),
            Err(SsnalError::Capability(_))
        ));
    }

    #[test]
    fn index_set_validates_range() {
        assert!(IndexSet::new(vec![0, 7], 7).is_err());
        let s = IndexSet::new(vec![4, 1, 1, 3], 5).unwrap();
        assert_eq!(s.as_slice(), &[1, 3, 4]);
        assert!(s.contains(3));
        assert!(!s.contains(0));
    }

    #[test]
    fn gram_is_positive_semidefinite() {
        // eigenvalues of A_J^T A_J stay above -1e-10
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..5 {
            let op = LinearOperator::dense(random_dense(6, 9, &mut rng));
            let set = IndexSet::new(vec![0, 2, 3, 8], 9).unwrap();
            let g = op.gram_submatrix(&set).unwrap();
            let r = set.len();
            let na = nalgebra::DMatrix::from_fn(r, r, |i, j| g.get(i, j));
            let eig = na.symmetric_eigen();
            for ev in eig.eigenvalues.iter() {
                assert!(*ev >= -1e-10, "eigenvalue {ev}");
            }
        }
    }
}
