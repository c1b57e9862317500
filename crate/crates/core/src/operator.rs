//! Collocation nodes, dense linear algebra and RBF differentiation matrices.
//!
//! The interpolation matrix is `A[i][j] = φ(x_i - x_j)`. Derivative
//! collocation matrices `B₁[i][j] = φ'(x_i - x_j)` and
//! `B₃[i][j] = φ'''(x_i - x_j)` yield the differentiation matrices
//! `W_x = B₁ A⁻¹` and `W_xxx = B₃ A⁻¹`, realized by solving
//! `A Wᵀ = Bᵀ` once per run (A is symmetric). Applying a differentiation
//! matrix to a vector of nodal values approximates the derivative at every
//! node simultaneously, which reduces each right-hand-side evaluation of the
//! semi-discrete system to three matrix-vector products.

use crate::error::{Error, Result};
use crate::kernel::KernelSpec;

/// Default relative pivot threshold for the LU factorization, at the scale
/// of double-precision machine epsilon. Configurable from the CLI so shape
/// sweeps can probe closer to the conditioning cliff.
pub const DEFAULT_PIVOT_TOL: f64 = 1e-14;

// ---------------------------------------------------------------------------
// Dense matrices
// ---------------------------------------------------------------------------

/// Row-major dense matrix of f64.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = DenseMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from nested rows; rows must be nonempty and rectangular.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::invalid("matrix must have at least one entry"));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid("ragged rows in matrix literal"));
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// y = M x.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matvec dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
            })
            .collect()
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        DenseMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self.get(i, k) * other.get(k, j)).sum()
        })
    }

    /// Operator infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

// ---------------------------------------------------------------------------
// Node sets
// ---------------------------------------------------------------------------

/// Ordered 1D collocation nodes spanning a closed interval.
///
/// The first and last node are the boundary nodes and must equal the
/// interval endpoints. At least four nodes are required: third derivatives
/// plus two Dirichlet boundary nodes leave no meaningful problem below that.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    points: Vec<f64>,
    a: f64,
    b: f64,
}

impl NodeSet {
    pub fn new(points: Vec<f64>, a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!("bad domain [{a}, {b}]")));
        }
        if points.len() < 4 {
            return Err(Error::invalid(format!(
                "need at least 4 nodes, got {}",
                points.len()
            )));
        }
        if points.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("non-finite node"));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("nodes must be strictly increasing"));
        }
        if points[0] != a || *points.last().unwrap() != b {
            return Err(Error::invalid(
                "first and last node must coincide with the domain endpoints",
            ));
        }
        Ok(NodeSet { points, a, b })
    }

    /// Uniform grid with spacing `h` including both endpoints.
    /// `(b - a) / h` must be an integer to within 1e-9.
    pub fn uniform(a: f64, b: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::invalid(format!("spacing must be positive, got {h}")));
        }
        let ratio = (b - a) / h;
        let n_gaps = ratio.round();
        if (ratio - n_gaps).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "spacing {h} does not divide the domain [{a}, {b}]: (b-a)/h = {ratio}"
            )));
        }
        let n_gaps = n_gaps as usize;
        let mut points: Vec<f64> = (0..=n_gaps).map(|i| a + i as f64 * h).collect();
        // Pin the right endpoint so the boundary node is exact.
        *points.last_mut().unwrap() = b;
        NodeSet::new(points, a, b)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }

    /// Index of the node matching `x` to within `tol`, if any.
    pub fn index_of(&self, x: f64, tol: f64) -> Option<usize> {
        self.points
            .iter()
            .position(|&p| (p - x).abs() <= tol)
    }
}

// ---------------------------------------------------------------------------
// Interpolation matrix and fill distance
// ---------------------------------------------------------------------------

/// A[i][j] = φ(x_i - x_j) over an arbitrary point list.
///
/// Each unordered pair is evaluated once and mirrored, so the result is
/// bitwise symmetric. Accepts any nonempty point list; solver-grade
/// constraints (ordering, boundary nodes, minimum size) live in [`NodeSet`].
pub fn build_interpolation_matrix(points: &[f64], spec: &KernelSpec) -> Result<DenseMatrix> {
    if points.is_empty() {
        return Err(Error::invalid("empty point list"));
    }
    let n = points.len();
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = spec.eval(points[i] - points[j])?;
            a.set(i, j, v);
            a.set(j, i, v);
        }
    }
    Ok(a)
}

/// Fill distance δ = max over the hull of the distance to the nearest node.
/// With sorted nodes whose endpoints bound the domain this is half the
/// largest consecutive gap. Returns 0 for fewer than two points.
pub fn radial_distance(points: &[f64]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1] - w[0]) / 2.0)
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// LU factorization with partial pivoting
// ---------------------------------------------------------------------------

/// Compact LU factors of a square matrix, P A = L U.
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

/// Factor `a` with partial pivoting. A pivot of magnitude at most
/// `pivot_tol * ‖A‖∞` aborts with [`Error::NearSingular`] carrying the
/// elimination step at which it happened.
pub fn lu_factor(a: &DenseMatrix, pivot_tol: f64) -> Result<LuFactors> {
    if !a.is_square() {
        return Err(Error::invalid(format!(
            "cannot factor a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::invalid("matrix has non-finite entries"));
    }
    let n = a.rows();
    let threshold = pivot_tol * a.norm_inf();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (pivot_row, pivot) = (k..n)
            .map(|i| (i, lu.get(i, k)))
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .unwrap();
        if pivot.abs() <= threshold {
            return Err(Error::NearSingular {
                index: k,
                pivot,
                threshold,
            });
        }
        if pivot_row != k {
            for j in 0..n {
                let tmp = lu.get(k, j);
                lu.set(k, j, lu.get(pivot_row, j));
                lu.set(pivot_row, j, tmp);
            }
            perm.swap(k, pivot_row);
        }
        for i in k + 1..n {
            let factor = lu.get(i, k) / pivot;
            lu.set(i, k, factor);
            for j in k + 1..n {
                let v = lu.get(i, j) - factor * lu.get(k, j);
                lu.set(i, j, v);
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Solve A x = b for a single right-hand side.
    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(b.len(), n, "rhs length mismatch");
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        // Forward substitution (unit lower triangle).
        for i in 1..n {
            let mut sum = x[i];
            for j in 0..i {
                sum -= self.lu.get(i, j) * x[j];
            }
            x[i] = sum;
        }
        // Back substitution.
        for i in (0..n).rev() {
            let mut sum = x[i];
            for j in i + 1..n {
                sum -= self.lu.get(i, j) * x[j];
            }
            x[i] = sum / self.lu.get(i, i);
        }
        x
    }

    /// Solve A X = B column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> DenseMatrix {
        let n = self.dim();
        assert_eq!(b.rows(), n, "rhs row count mismatch");
        let mut x = DenseMatrix::zeros(n, b.cols());
        let mut col = vec![0.0; n];
        for j in 0..b.cols() {
            for i in 0..n {
                col[i] = b.get(i, j);
            }
            let sol = self.solve_vec(&col);
            for i in 0..n {
                x.set(i, j, sol[i]);
            }
        }
        x
    }
}

/// Solve A X = B by LU with partial pivoting at the default pivot threshold.
pub fn solve_linear(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    solve_linear_with_tol(a, b, DEFAULT_PIVOT_TOL)
}

pub fn solve_linear_with_tol(
    a: &DenseMatrix,
    b: &DenseMatrix,
    pivot_tol: f64,
) -> Result<DenseMatrix> {
    if b.rows() != a.rows() {
        return Err(Error::invalid(format!(
            "rhs has {} rows, matrix has {}",
            b.rows(),
            a.rows()
        )));
    }
    Ok(lu_factor(a, pivot_tol)?.solve_matrix(b))
}

// ---------------------------------------------------------------------------
// Condition number
// ---------------------------------------------------------------------------

/// 2-norm condition number σ_max / σ_min by full singular value
/// decomposition. Matrices here stay small (N of order a hundred), so the
/// exact number is affordable and the shape-selection workflow gets a
/// trustworthy diagnostic instead of a norm estimate. Returns +∞ when the
/// smallest singular value is exactly zero.
pub fn condition_estimate(a: &DenseMatrix) -> f64 {
    assert!(a.is_square(), "condition number needs a square matrix");
    let n = a.rows();
    let m = nalgebra::DMatrix::from_row_slice(n, n, a.entries());
    let sv = m.svd_unordered(false, false).singular_values;
    let s_max = sv.iter().fold(0.0f64, |acc, &v| acc.max(v));
    let s_min = sv.iter().fold(f64::INFINITY, |acc, &v| acc.min(v));
    if s_min == 0.0 {
        f64::INFINITY
    } else {
        s_max / s_min
    }
}

// ---------------------------------------------------------------------------
// Differentiation operators
// ---------------------------------------------------------------------------

/// First- and third-derivative collocation matrices with conditioning
/// metadata. Immutable once built; one instance is shared per run.
#[derive(Debug, Clone)]
pub struct DiffOperators {
    pub d1: DenseMatrix,
    pub d3: DenseMatrix,
    /// 2-norm condition number of the interpolation matrix.
    pub cond2: f64,
    /// Fill distance of the node set.
    pub delta: f64,
}

pub fn build_diff_operators(nodes: &NodeSet, spec: &KernelSpec) -> Result<DiffOperators> {
    build_diff_operators_with_tol(nodes, spec, DEFAULT_PIVOT_TOL)
}

pub fn build_diff_operators_with_tol(
    nodes: &NodeSet,
    spec: &KernelSpec,
    pivot_tol: f64,
) -> Result<DiffOperators> {
    let pts = nodes.points();
    let n = pts.len();
    let a = build_interpolation_matrix(pts, spec)?;
    let cond2 = condition_estimate(&a);
    let delta = radial_distance(pts);

    let mut b1t = DenseMatrix::zeros(n, n);
    let mut b3t = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s = pts[i] - pts[j];
            // Transposed storage: column i of Bᵀ is row i of B.
            b1t.set(j, i, spec.eval_deriv(s, 1)?);
            b3t.set(j, i, spec.eval_deriv(s, 3)?);
        }
    }

    // W = B A⁻¹ from A Wᵀ = Bᵀ, using the symmetry of A.
    let lu = lu_factor(&a, pivot_tol)?;
    let d1 = lu.solve_matrix(&b1t).transpose();
    let d3 = lu.solve_matrix(&b3t).transpose();

    Ok(DiffOperators { d1, d3, cond2, delta })
}
