//! Dense numeric kernel.
//!
//! Everything downstream reduces to four operations on small dense data:
//! orthonormalization with rank decisions, minimum-norm least squares,
//! largest singular values, and intersections of spanned subspaces. The
//! kernel is self-contained: a one-sided Jacobi SVD handles every matrix
//! below [`DENSE_SVD_LIMIT`] rows/columns, and a seeded power iteration on
//! `AᵀA` covers larger operands. All routines are deterministic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Dimension threshold below which norms and factorizations use the dense
/// Jacobi SVD; at or above it, iterative estimation takes over.
pub const DENSE_SVD_LIMIT: usize = 32;

/// Relative rank tolerance used by callers that do not carry their own.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

// ── vectors ────────────────────────────────────────────────────────────────

/// Column vector with finite entries and positive dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector {
    entries: Vec<f64>,
}

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("vector must have dimension >= 1".into()));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("vector entries"));
        }
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![0.0; dim.max(1)] }
    }

    /// Standard basis vector `e_i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> f64 {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: f64) {
        self.entries[i] = value;
    }

    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dist(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "add of mismatched dimensions");
        Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "sub of mismatched dimensions");
        Self { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { entries: self.entries.iter().map(|a| a * factor).collect() }
    }

    /// `self + factor * other`, the workhorse of the Gram-Schmidt loops.
    pub fn axpy(&self, factor: f64, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "axpy of mismatched dimensions");
        Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + factor * b)
                .collect(),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim() && self.dist(other) <= tol
    }
}

impl std::fmt::Display for Vector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

// ── matrices ───────────────────────────────────────────────────────────────

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument("matrix dimensions must be >= 1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        if data.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidArgument("matrix needs at least one row and column".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vector]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::InvalidArgument("matrix needs at least one column".into()));
        }
        let n = cols[0].dim();
        if cols.iter().any(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: cols.iter().find(|c| c.dim() != n).unwrap().dim() });
        }
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.set(i, j, c.entry(i));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn col(&self, j: usize) -> Vector {
        Vector { entries: (0..self.rows).map(|i| self.get(i, j)).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul of mismatched shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.get(i, k);
                if aik == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &Vector) -> Vector {
        assert_eq!(self.cols, x.dim(), "matvec of mismatched shapes");
        let mut out = Vector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = 0.0;
            for j in 0..self.cols {
                acc += self.get(i, j) * x.entry(j);
            }
            out.entries[i] = acc;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * factor).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

// ── orthonormal bases ──────────────────────────────────────────────────────

/// Orthonormal set of columns spanning a linear subspace. An empty column
/// list represents the zero subspace.
#[derive(Debug, Clone)]
pub struct Basis {
    ambient_dim: usize,
    columns: Vec<Vector>,
    tol: f64,
}

impl Basis {
    /// Wraps columns after verifying pairwise inner products are within
    /// `tol` of the identity Gram matrix.
    pub fn new(ambient_dim: usize, columns: Vec<Vector>, tol: f64) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::InvalidArgument("ambient dimension must be >= 1".into()));
        }
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Error::InvalidArgument("basis tolerance must be finite and >= 0".into()));
        }
        if columns.len() > ambient_dim {
            return Err(Error::InvalidArgument(format!(
                "{} columns cannot be independent in dimension {ambient_dim}",
                columns.len()
            )));
        }
        for c in &columns {
            if c.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: c.dim() });
            }
        }
        for i in 0..columns.len() {
            for j in i..columns.len() {
                let g = columns[i].dot(&columns[j]);
                let want = if i == j { 1.0 } else { 0.0 };
                if (g - want).abs() > tol {
                    return Err(Error::InvalidArgument(format!(
                        "columns {i},{j} violate orthonormality: gram entry {g}"
                    )));
                }
            }
        }
        Ok(Self { ambient_dim, columns, tol })
    }

    pub fn empty(ambient_dim: usize, tol: f64) -> Self {
        Self { ambient_dim, columns: Vec::new(), tol }
    }

    pub fn full(ambient_dim: usize, tol: f64) -> Self {
        let columns = (0..ambient_dim).map(|i| Vector::unit(ambient_dim, i)).collect();
        Self { ambient_dim, columns, tol }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of basis columns, i.e. the subspace dimension.
    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vector] {
        &self.columns
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Orthogonal projection of `x` onto the spanned subspace.
    pub fn project(&self, x: &Vector) -> Vector {
        assert_eq!(x.dim(), self.ambient_dim, "projection of mismatched dimension");
        let mut out = Vector::zeros(self.ambient_dim);
        for c in &self.columns {
            out = out.axpy(c.dot(x), c);
        }
        out
    }

    /// Projection onto the orthogonal complement.
    pub fn reject(&self, x: &Vector) -> Vector {
        x.sub(&self.project(x))
    }

    /// `B Bᵀ` as a dense matrix.
    pub fn projector_matrix(&self) -> Matrix {
        let mut p = Matrix::zeros(self.ambient_dim, self.ambient_dim);
        for c in &self.columns {
            for i in 0..self.ambient_dim {
                for j in 0..self.ambient_dim {
                    let v = p.get(i, j) + c.entry(i) * c.entry(j);
                    p.set(i, j, v);
                }
            }
        }
        p
    }

    /// Orthonormal basis of the orthogonal complement, produced by deflating
    /// the standard basis against these columns.
    pub fn complement(&self) -> Basis {
        let mut pool: Vec<Vector> = self.columns.clone();
        pool.extend((0..self.ambient_dim).map(|i| Vector::unit(self.ambient_dim, i)));
        let all = orthonormalize(&pool, composite_drop_tol(&pool))
            .expect("complement completion cannot fail on a nonempty pool");
        Basis {
            ambient_dim: self.ambient_dim,
            columns: all.columns[self.dim()..].to_vec(),
            tol: self.tol,
        }
    }

    /// Membership test: distance from `x` to the subspace is at most `tol`.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        self.reject(x).norm() <= tol
    }
}

/// Drop tolerance scaled to the data: `DEFAULT_RANK_TOL` times the largest
/// column norm (or alone when all columns vanish).
pub fn composite_drop_tol(vectors: &[Vector]) -> f64 {
    let max_norm = vectors.iter().map(Vector::norm).fold(0.0_f64, f64::max);
    DEFAULT_RANK_TOL * max_norm.max(1.0)
}

/// Modified Gram-Schmidt with re-orthogonalization. Vectors whose residual
/// norm after deflation is at most `tol` are dropped.
pub fn orthonormalize(vectors: &[Vector], tol: f64) -> Result<Basis> {
    if vectors.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot infer ambient dimension from an empty list".into(),
        ));
    }
    let ambient = vectors[0].dim();
    let mut kept: Vec<Vector> = Vec::new();
    for v in vectors {
        if v.dim() != ambient {
            return Err(Error::DimensionMismatch { expected: ambient, got: v.dim() });
        }
        let mut w = v.clone();
        // Two deflation passes keep orthogonality near machine precision
        // even for nearly dependent inputs.
        for _ in 0..2 {
            for k in &kept {
                w = w.axpy(-k.dot(&w), k);
            }
        }
        let n = w.norm();
        if n > tol {
            kept.push(w.scale(1.0 / n));
        }
    }
    Basis::new(ambient, kept, tol.max(1e-12))
}

// ── singular value decomposition ───────────────────────────────────────────

/// Thin SVD `A = U diag(sigma) Vᵀ` with `sigma` sorted descending. Columns
/// of `U` paired with zero singular values are zero vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

const JACOBI_MAX_SWEEPS: usize = 64;
const JACOBI_EPS: f64 = 1e-15;

/// One-sided Jacobi SVD. Accurate to machine precision for the small dense
/// matrices this crate works with.
pub fn jacobi_svd(a: &Matrix) -> Svd {
    if a.rows() < a.cols() {
        let t = jacobi_svd(&a.transpose());
        return Svd { u: t.v, sigma: t.sigma, v: t.u };
    }
    let m = a.rows();
    let n = a.cols();
    let mut w: Vec<Vector> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vector> = (0..n).map(|j| Vector::unit(n, j)).collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let app = w[p].dot(&w[p]);
                let aqq = w[q].dot(&w[q]);
                let apq = w[p].dot(&w[q]);
                if apq.abs() <= JACOBI_EPS * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let theta = 0.5 * (2.0 * apq).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                let wp = w[p].scale(c).axpy(s, &w[q]);
                let wq = w[q].scale(c).axpy(-s, &w[p]);
                w[p] = wp;
                w[q] = wq;
                let vp = v[p].scale(c).axpy(s, &v[q]);
                let vq = v[q].scale(c).axpy(-s, &v[p]);
                v[p] = vp;
                v[q] = vq;
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = w.iter().map(Vector::norm).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap());

    let mut u = Matrix::zeros(m, n);
    let mut vm = Matrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (slot, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            let uc = w[j].scale(1.0 / s);
            for i in 0..m {
                u.set(i, slot, uc.entry(i));
            }
        }
        for i in 0..n {
            vm.set(i, slot, v[j].entry(i));
        }
    }
    Svd { u, sigma, v: vm }
}

/// Largest singular value. Dense Jacobi below [`DENSE_SVD_LIMIT`]; seeded
/// power iteration on `AᵀA` otherwise, with `tol` as the relative
/// stagnation threshold for the iterative path.
pub fn operator_norm(a: &Matrix, tol: f64) -> f64 {
    if a.rows().max(a.cols()) < DENSE_SVD_LIMIT {
        return jacobi_svd(a).sigma.first().copied().unwrap_or(0.0);
    }
    let tol = if tol.is_finite() && tol > 0.0 { tol } else { 1e-12 };
    let at = a.transpose();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0ba1);
    let mut x = Vector { entries: (0..a.cols()).map(|_| rng.random::<f64>() - 0.5).collect() };
    let nx = x.norm();
    if nx == 0.0 {
        return 0.0;
    }
    x = x.scale(1.0 / nx);
    let mut prev = 0.0_f64;
    for _ in 0..50_000 {
        let y = a.mul_vec(&x);
        let est = y.norm();
        if est == 0.0 {
            return 0.0;
        }
        let z = at.mul_vec(&y);
        let nz = z.norm();
        if nz == 0.0 {
            return est;
        }
        x = z.scale(1.0 / nz);
        if (est - prev).abs() <= tol * est.max(1e-300) {
            return est;
        }
        prev = est;
    }
    prev
}

// ── least squares and nullspaces ───────────────────────────────────────────

/// Minimum-norm least-squares solution of `A x = b`. Singular values at or
/// below `tol` times the largest are treated as zero. Returns the solution
/// and the residual norm `||A x - b||`.
pub fn solve_least_squares(a: &Matrix, b: &Vector, tol: f64) -> Result<(Vector, f64)> {
    if b.dim() != a.rows() {
        return Err(Error::DimensionMismatch { expected: a.rows(), got: b.dim() });
    }
    let svd = jacobi_svd(a);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.max(0.0) * smax;
    let mut x = Vector::zeros(a.cols());
    for (j, &s) in svd.sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let uj = svd.u.col(j);
        let vj = svd.v.col(j);
        x = x.axpy(uj.dot(b) / s, &vj);
    }
    let residual = a.mul_vec(&x).sub(b).norm();
    Ok((x, residual))
}

/// Orthonormal basis of the nullspace of `A`, with rank decided at `tol`
/// relative to the largest singular value.
pub fn nullspace(a: &Matrix, tol: f64) -> Basis {
    let svd = jacobi_svd(a);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.max(0.0) * smax.max(1.0);
    let cols: Vec<Vector> = svd
        .sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cutoff)
        .map(|(j, _)| svd.v.col(j))
        .collect();
    Basis { ambient_dim: a.cols(), columns: cols, tol: tol.max(1e-12) }
}

/// Rank of `A` decided at `tol` relative to the largest singular value.
pub fn rank(a: &Matrix, tol: f64) -> usize {
    let svd = jacobi_svd(a);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let cutoff = tol.max(0.0) * smax.max(1.0);
    svd.sigma.iter().filter(|&&s| s > cutoff).count()
}

/// Orthonormal basis of `span(U) ∩ span(V)`, computed as the nullspace of
/// the stacked complement projectors `[I - U Uᵀ; I - V Vᵀ]`.
pub fn subspace_intersection(u: &Basis, v: &Basis, tol: f64) -> Result<Basis> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: u.ambient_dim(), got: v.ambient_dim() });
    }
    let n = u.ambient_dim();
    let pu = u.projector_matrix();
    let pv = v.projector_matrix();
    let id = Matrix::identity(n);
    let cu = id.sub(&pu);
    let cv = id.sub(&pv);
    let mut stacked = Matrix::zeros(2 * n, n);
    for i in 0..n {
        for j in 0..n {
            stacked.set(i, j, cu.get(i, j));
            stacked.set(n + i, j, cv.get(i, j));
        }
    }
    Ok(nullspace(&stacked, tol))
}

// ── tests ──────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;

    fn vec2(a: f64, b: f64) -> Vector {
        Vector::new(vec![a, b]).unwrap()
    }

    const SQRT_HALF: f64 = 0.7071067811865476;

    #[test]
    fn orthonormalize_pivots_to_coordinate_axes() {
        let basis = orthonormalize(&[vec2(1.0, 0.0), vec2(1.0, 1.0)], 1e-10).unwrap();
        assert_eq!(basis.dim(), 2);
        assert!(basis.columns()[0].approx_eq(&vec2(1.0, 0.0), 1e-14));
        assert!(basis.columns()[1].approx_eq(&vec2(0.0, 1.0), 1e-14));
    }

    #[test]
    fn orthonormalize_rescales_single_vector() {
        let basis = orthonormalize(&[vec2(2.0, 0.0)], 1e-10).unwrap();
        assert_eq!(basis.dim(), 1);
        assert!(basis.columns()[0].approx_eq(&vec2(1.0, 0.0), 1e-15));
    }

    #[test]
    fn orthonormalize_drops_dependent_vector() {
        let basis = orthonormalize(&[vec2(1.0, 0.0), vec2(2.0, 0.0)], 1e-10).unwrap();
        assert_eq!(basis.dim(), 1);
    }

    #[test]
    fn least_squares_exact_system() {
        let a = Matrix::identity(2);
        let b = vec2(3.0, 4.0);
        let (x, r) = solve_least_squares(&a, &b, 1e-12).unwrap();
        assert!(x.approx_eq(&b, 1e-14));
        assert!(r.abs() <= 1e-14);
    }

    #[test]
    fn least_squares_overdetermined_midpoint() {
        // Two equations x = 0 and x = 1: the compromise is x = 1/2 with
        // residual sqrt(1/2).
        let a = Matrix::from_rows(&[vec![1.0], vec![1.0]]).unwrap();
        let b = vec2(0.0, 1.0);
        let (x, r) = solve_least_squares(&a, &b, 1e-12).unwrap();
        assert!((x.entry(0) - 0.5).abs() <= 1e-14);
        assert!((r - SQRT_HALF).abs() <= 1e-14);
    }

    #[test]
    fn least_squares_rank_deficient_is_minimum_norm() {
        // A = [[1, 1]]: solutions form a line; the minimum-norm one is
        // (1/2, 1/2) for b = 1.
        let a = Matrix::from_rows(&[vec![1.0, 1.0]]).unwrap();
        let b = Vector::new(vec![1.0]).unwrap();
        let (x, r) = solve_least_squares(&a, &b, 1e-12).unwrap();
        assert!(x.approx_eq(&vec2(0.5, 0.5), 1e-14));
        assert!(r <= 1e-14);
    }

    #[test]
    fn operator_norm_identity_is_one() {
        assert!((operator_norm(&Matrix::identity(2), 1e-12) - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn operator_norm_diagonal_takes_largest_entry() {
        let a = Matrix::from_rows(&[vec![0.5, 0.0], vec![0.0, 0.25]]).unwrap();
        assert!((operator_norm(&a, 1e-12) - 0.5).abs() <= 1e-14);
    }

    #[test]
    fn operator_norm_of_projector_product_is_cosine() {
        // Projector onto span(1,1) after projector onto span(1,0) has matrix
        // [[1/2, 0], [1/2, 0]]; its largest singular value, by the 2x2
        // closed form (eigenvalues of AᵀA = [[1/2, 0], [0, 0]]), is
        // sqrt(1/2).
        let a = Matrix::from_rows(&[vec![0.5, 0.0], vec![0.5, 0.0]]).unwrap();
        assert!((operator_norm(&a, 1e-12) - SQRT_HALF).abs() <= 1e-14);
    }

    #[test]
    fn operator_norm_matches_transpose() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let data: Vec<f64> = (0..25).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let a = Matrix::new(5, 5, data).unwrap();
            let d = (operator_norm(&a, 1e-12) - operator_norm(&a.transpose(), 1e-12)).abs();
            assert!(d <= 1e-10, "transpose norm gap {d}");
        }
    }

    #[test]
    fn iterative_norm_path_matches_planted_spectrum() {
        // Build A = Q1 D Q2ᵀ in dimension 40 with known leading singular
        // value 3; the power-iteration path must recover it.
        let n = 40;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let random_orthogonal = |rng: &mut ChaCha8Rng| {
            let cols: Vec<Vector> = (0..n)
                .map(|_| Vector::new((0..n).map(|_| rng.random::<f64>() - 0.5).collect()).unwrap())
                .collect();
            orthonormalize(&cols, 1e-10).unwrap()
        };
        let q1 = Matrix::from_cols(random_orthogonal(&mut rng).columns()).unwrap();
        let q2 = Matrix::from_cols(random_orthogonal(&mut rng).columns()).unwrap();
        let mut d = Matrix::zeros(n, n);
        for i in 0..n {
            d.set(i, i, if i == 0 { 3.0 } else { 2.0 * (n - i) as f64 / n as f64 });
        }
        let a = q1.mul(&d).mul(&q2.transpose());
        assert!(a.rows() >= DENSE_SVD_LIMIT);
        let got = operator_norm(&a, 1e-13);
        assert!((got - 3.0).abs() <= 1e-8, "planted norm mismatch: {got}");
    }

    #[test]
    fn svd_reconstructs_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (m, n) in [(4, 4), (6, 3), (3, 6), (5, 1), (1, 5)] {
            let data: Vec<f64> = (0..m * n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let a = Matrix::new(m, n, data).unwrap();
            let svd = jacobi_svd(&a);
            let k = svd.sigma.len();
            let mut s = Matrix::zeros(k, k);
            for (i, &sv) in svd.sigma.iter().enumerate() {
                s.set(i, i, sv);
            }
            let back = svd.u.mul(&s).mul(&svd.v.transpose());
            assert!(back.sub(&a).frobenius_norm() <= 1e-12, "reconstruction failed {m}x{n}");
            for w in svd.sigma.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn nullspace_of_rank_one_matrix() {
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let ns = nullspace(&a, 1e-12);
        assert_eq!(ns.dim(), 1);
        let v = &ns.columns()[0];
        assert!(a.mul_vec(v).norm() <= 1e-14);
    }

    #[test]
    fn intersection_of_coordinate_planes() {
        let e = |i| Vector::unit(3, i);
        let u = orthonormalize(&[e(0), e(1)], 1e-10).unwrap();
        let v = orthonormalize(&[e(1), e(2)], 1e-10).unwrap();
        let w = subspace_intersection(&u, &v, 1e-10).unwrap();
        assert_eq!(w.dim(), 1);
        let c = &w.columns()[0];
        assert!((c.entry(1).abs() - 1.0).abs() <= 1e-12);
        assert!(c.entry(0).abs() <= 1e-12 && c.entry(2).abs() <= 1e-12);
    }

    #[test]
    fn intersection_of_transversal_lines_is_zero() {
        let u = orthonormalize(&[vec2(1.0, 0.0)], 1e-10).unwrap();
        let v = orthonormalize(&[vec2(1.0, 1.0)], 1e-10).unwrap();
        let w = subspace_intersection(&u, &v, 1e-10).unwrap();
        assert!(w.is_empty());
    }

    #[test]
    fn intersection_is_idempotent_on_equal_inputs() {
        let u = orthonormalize(&[Vector::new(vec![1.0, 2.0, 2.0]).unwrap()], 1e-10).unwrap();
        let w = subspace_intersection(&u, &u, 1e-10).unwrap();
        assert_eq!(w.dim(), 1);
        // Same span: the projector matrices agree.
        assert!(w.projector_matrix().sub(&u.projector_matrix()).frobenius_norm() <= 1e-12);
    }

    #[test]
    fn complement_completes_the_space() {
        let u = orthonormalize(&[Vector::new(vec![1.0, 1.0, 0.0]).unwrap()], 1e-10).unwrap();
        let c = u.complement();
        assert_eq!(c.dim(), 2);
        let p = u.projector_matrix().add(&c.projector_matrix());
        assert!(p.sub(&Matrix::identity(3)).frobenius_norm() <= 1e-12);
    }
}
