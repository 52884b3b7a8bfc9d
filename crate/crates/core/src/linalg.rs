//! Dense symmetric-matrix primitives.
//!
//! Matrices are vectorized column-major: the first `n` entries of `vec(X)`
//! are the first column of `X`. `I ⊗ X` acting on `vec(Y)` gives `vec(X Y)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type DenseMatrix = DMatrix<f64>;

/// Relative pivot threshold below which Cholesky reports "not positive definite".
pub const PD_PIVOT_TOL: f64 = 1e-14;

/// A dense real symmetric `n × n` matrix. Entries are exactly symmetric.
#[derive(Clone, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymMatrix{:?}", self.0)
    }
}

impl SymMatrix {
    /// Accepts a square matrix whose asymmetry is at most `1e-12 · max|entry|`
    /// and stores its exact symmetric part.
    pub fn new(m: DenseMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::dim(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.amax().max(f64::MIN_POSITIVE);
        let n = m.nrows();
        for j in 0..n {
            for i in 0..j {
                if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::dim(format!(
                        "matrix is not symmetric at ({i},{j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        Ok(Self::symmetric_part(&m))
    }

    fn symmetric_part(m: &DenseMatrix) -> Self {
        let n = m.nrows();
        let mut s = m.clone();
        for j in 0..n {
            for i in 0..j {
                let v = 0.5 * (m[(i, j)] + m[(j, i)]);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        SymMatrix(s)
    }

    pub fn from_row_slice(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::dim(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, data))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        SymMatrix(DMatrix::zeros(n, n))
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        SymMatrix(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    /// Symmetric matrix with a single pair of unit entries at `(i, j)` and `(j, i)`.
    pub fn unit_pair(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = 1.0;
        m[(j, i)] = 1.0;
        SymMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DenseMatrix {
        &self.0
    }

    pub fn into_inner(self) -> DenseMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Sets `(i, j)` and `(j, i)` together.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[(i, j)] = v;
        self.0[(j, i)] = v;
    }

    /// `self + alpha · d`
    pub fn axpy(&self, alpha: f64, d: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &d.0 * alpha)
    }

    pub fn scale(&self, alpha: f64) -> SymMatrix {
        SymMatrix(&self.0 * alpha)
    }

    /// Trace inner product with a matrix of the same size.
    ///
    /// Panics on a size mismatch; use [`trace_inner`] for a checked version.
    pub fn dot(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n(), other.n(), "dimension mismatch in inner product");
        self.0.dot(&other.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn vec(&self) -> DVector<f64> {
        vec(&self.0)
    }

    /// Inverse through the Cholesky factor; the result is exactly symmetric.
    pub fn inverse(&self) -> Result<SymMatrix> {
        let l = cholesky(self)?;
        let n = self.n();
        let linv = l.solve_lower_triangular(&DMatrix::identity(n, n)).ok_or(
            Error::NotPositiveDefinite {
                index: 0,
                pivot: 0.0,
            },
        )?;
        Ok(Self::symmetric_part(&(linv.transpose() * linv)))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.0.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().unwrap()
    }

    pub fn is_positive_definite(&self) -> bool {
        cholesky(self).is_ok()
    }
}

impl Add for &SymMatrix {
    type Output = SymMatrix;
    fn add(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &SymMatrix {
    type Output = SymMatrix;
    fn sub(self, rhs: &SymMatrix) -> SymMatrix {
        SymMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: f64) -> SymMatrix {
        self.scale(rhs)
    }
}

impl Neg for &SymMatrix {
    type Output = SymMatrix;
    fn neg(self) -> SymMatrix {
        SymMatrix(-&self.0)
    }
}

/// Result of a maximal-steplength computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Steplength {
    Finite(f64),
    /// The ray never leaves the positive definite cone.
    Infinite,
}

impl Steplength {
    pub fn is_finite(self) -> bool {
        matches!(self, Steplength::Finite(_))
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Steplength::Finite(v) => Some(v),
            Steplength::Infinite => None,
        }
    }

    /// The steplength as a float, `+inf` when unbounded.
    pub fn as_f64(self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }

    /// Steplength from the largest eigenvalue of `-L⁻¹ D L⁻ᵀ`.
    pub(crate) fn from_lambda_max(lambda: f64) -> Self {
        if lambda > 0.0 {
            Steplength::Finite(1.0 / lambda)
        } else {
            Steplength::Infinite
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepSign {
    Plus,
    Minus,
}

/// Column-major stacking.
pub fn vec(x: &DenseMatrix) -> DVector<f64> {
    DVector::from_column_slice(x.as_slice())
}

/// Inverse of [`vec`] for square matrices.
pub fn mat(x: &[f64], n: usize) -> Result<DenseMatrix> {
    if x.len() != n * n {
        return Err(Error::dim(format!(
            "cannot reshape {} entries into {n}x{n}",
            x.len()
        )));
    }
    Ok(DMatrix::from_column_slice(n, n, x))
}

pub fn trace_inner(x: &SymMatrix, z: &SymMatrix) -> Result<f64> {
    if x.n() != z.n() {
        return Err(Error::dim(format!(
            "{}x{} vs {}x{}",
            x.n(),
            x.n(),
            z.n(),
            z.n()
        )));
    }
    Ok(x.dot(z))
}

/// Lower-triangular Cholesky factor. A pivot at or below
/// `PD_PIVOT_TOL · max diag` is reported as not positive definite.
pub fn cholesky(x: &SymMatrix) -> Result<DenseMatrix> {
    let a = x.as_matrix();
    let n = a.nrows();
    let max_diag = (0..n).map(|i| a[(i, i)]).fold(f64::NEG_INFINITY, f64::max);
    if !(max_diag > 0.0) {
        return Err(Error::NotPositiveDefinite {
            index: 0,
            pivot: max_diag,
        });
    }
    let threshold = PD_PIVOT_TOL * max_diag;
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > threshold) {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// `sup { α : X ± α D ≻ 0 }` through `1 / λ_max(−L⁻¹ D L⁻ᵀ)` with `X = L Lᵀ`.
pub fn max_steplength(x: &SymMatrix, d: &SymMatrix, sign: StepSign) -> Result<Steplength> {
    if x.n() != d.n() {
        return Err(Error::dim("direction and iterate differ in size"));
    }
    let l = cholesky(x)?;
    let dm = match sign {
        StepSign::Plus => d.as_matrix().clone(),
        StepSign::Minus => -d.as_matrix(),
    };
    let lambda = scaled_lambda_max(&l, &dm);
    Ok(Steplength::from_lambda_max(lambda))
}

/// `λ_max(−L⁻¹ D L⁻ᵀ)` given the Cholesky factor `L`.
fn scaled_lambda_max(l: &DenseMatrix, d: &DenseMatrix) -> f64 {
    let y = l
        .solve_lower_triangular(d)
        .expect("Cholesky factor has a positive diagonal");
    let w = l
        .solve_lower_triangular(&y.transpose())
        .expect("Cholesky factor has a positive diagonal");
    let w = -SymMatrix::symmetric_part(&w).into_inner();
    SymmetricEigen::new(w)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Minimum-norm least-squares solution of `A x ≈ b` (pseudoinverse solution).
///
/// Singular values below `max(rows, cols) · ε · σ_max` are treated as zero.
pub fn min_norm_least_squares(a: &DenseMatrix, b: &[f64]) -> Result<DVector<f64>> {
    if a.nrows() != b.len() {
        return Err(Error::dim(format!(
            "system has {} rows but right-hand side has {} entries",
            a.nrows(),
            b.len()
        )));
    }
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Ok(DVector::zeros(cols));
    }
    let svd = full_svd(a)?;
    let sigma_max = svd.s.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return Ok(DVector::zeros(cols));
    }
    let eps = rows.max(cols) as f64 * f64::EPSILON * sigma_max;
    let rhs = DVector::from_column_slice(b);
    let mut x = DVector::zeros(cols);
    for (i, &sigma) in svd.s.iter().enumerate() {
        if sigma > eps {
            let coeff = svd.u.column(i).dot(&rhs) / sigma;
            x.axpy(coeff, &svd.v.column(i), 1.0);
        }
    }
    Ok(x)
}

/// Minimizer of `‖x‖² + ‖B x‖²` subject to `sᵀx = target`.
///
/// This is the minimum-norm solution of the direction systems once the
/// auxiliary unknowns, which enter through an invertible block, are
/// eliminated. Solving through a QR factorization of `[I; B]` keeps the
/// normalization exact even when `B` has entries many orders of magnitude
/// apart. Returns `None` when `s = 0`.
pub(crate) fn normalized_min_norm(
    b: &DenseMatrix,
    s: &DVector<f64>,
    target: f64,
) -> Option<DVector<f64>> {
    let k = b.ncols();
    let mut stacked = DMatrix::zeros(k + b.nrows(), k);
    stacked.view_mut((0, 0), (k, k)).fill_with_identity();
    stacked.view_mut((k, 0), b.shape()).copy_from(b);
    // (RᵀR)⁻¹ s by two triangular solves; the identity block keeps R regular
    let r = stacked.qr().r();
    let v = r
        .tr_solve_upper_triangular(s)
        .and_then(|u| r.solve_upper_triangular(&u))?;
    let denom = s.dot(&v);
    if !(denom.is_finite() && denom > 0.0) {
        return None;
    }
    Some(v * (target / denom))
}

/// Minimizer of `‖x‖² + ‖B x − r‖²`, the eliminated form of the centering system.
pub(crate) fn damped_least_squares(b: &DenseMatrix, r: &DVector<f64>) -> DVector<f64> {
    let k = b.ncols();
    let mut stacked = DMatrix::zeros(k + b.nrows(), k);
    stacked.view_mut((0, 0), (k, k)).fill_with_identity();
    stacked.view_mut((k, 0), b.shape()).copy_from(b);
    let mut rhs = DVector::zeros(k + b.nrows());
    rhs.rows_mut(k, b.nrows()).copy_from(r);
    let qr = stacked.qr();
    let qtr = qr.q().transpose() * rhs;
    qr.r()
        .solve_upper_triangular(&qtr)
        .expect("[I; B] has full column rank")
}

/// Full singular value decomposition `A = U Σ Vᵀ` with square `U`, `V` and
/// singular values in decreasing order.
pub(crate) struct FullSvd {
    pub u: DenseMatrix,
    pub s: Vec<f64>,
    pub v: DenseMatrix,
}

/// nalgebra's SVD loses accuracy on some wide matrices, so this goes through faer.
pub(crate) fn full_svd(a: &DenseMatrix) -> Result<FullSvd> {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Ok(FullSvd {
            u: DMatrix::identity(rows, rows),
            s: Vec::new(),
            v: DMatrix::identity(cols, cols),
        });
    }
    let svd = faer::Mat::from_fn(rows, cols, |i, j| a[(i, j)])
        .svd()
        .map_err(|_| Error::NoConvergence)?;
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    Ok(FullSvd {
        u: DMatrix::from_fn(rows, rows, |i, j| u[(i, j)]),
        s: (0..rows.min(cols)).map(|i| s[i]).collect(),
        v: DMatrix::from_fn(cols, cols, |i, j| v[(i, j)]),
    })
}

/// `½ (D + Dᵀ)`
pub fn symmetrize(d: &DenseMatrix) -> Result<SymMatrix> {
    if !d.is_square() || d.nrows() == 0 {
        return Err(Error::dim(format!(
            "cannot symmetrize a {}x{} matrix",
            d.nrows(),
            d.ncols()
        )));
    }
    Ok(SymMatrix::symmetric_part(d))
}

/// `I_n ⊗ X`, the block diagonal matrix with `n` copies of `X`.
pub fn kron_identity(x: &DenseMatrix) -> DenseMatrix {
    let n = x.nrows();
    let mut k = DMatrix::zeros(n * n, n * n);
    for b in 0..n {
        k.view_mut((b * n, b * n), (n, n)).copy_from(x);
    }
    k
}

/// Symmetric part of `mat(v)` for a vector of length `n²`.
pub(crate) fn sym_of_vec(v: &DVector<f64>, n: usize) -> SymMatrix {
    SymMatrix::symmetric_part(&DMatrix::from_column_slice(n, n, v.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(n: usize, d: &[f64]) -> SymMatrix {
        SymMatrix::from_row_slice(n, d).unwrap()
    }

    #[test]
    fn vec_is_column_major() {
        let x = sym(2, &[1.0, 3.0, 3.0, 2.0]);
        assert_eq!(x.vec().as_slice(), &[1.0, 3.0, 3.0, 2.0]);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(vec(&m).as_slice(), &[1.0, 3.0, 2.0, 4.0]);
        assert_eq!(
            SymMatrix::identity(2).vec().as_slice(),
            &[1.0, 0.0, 0.0, 1.0]
        );
    }

    #[test]
    fn mat_rejects_wrong_length() {
        assert!(matches!(
            mat(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], 2),
            Err(Error::Dimension(_))
        ));
        let m = DMatrix::from_row_slice(3, 3, &[1., 2., 3., 4., 5., 6., 7., 8., 9.]);
        assert_eq!(mat(vec(&m).as_slice(), 3).unwrap(), m);
    }

    #[test]
    fn trace_inner_examples() {
        let i3 = SymMatrix::identity(3);
        assert_eq!(trace_inner(&i3, &i3).unwrap(), 3.0);
        let x = sym(2, &[1.0, 0.9, 0.9, 1.0]);
        assert_eq!(trace_inner(&x, &SymMatrix::identity(2)).unwrap(), 2.0);
        let p = sym(2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(trace_inner(&p, &p).unwrap(), 2.0);
        assert!(trace_inner(&i3, &p).is_err());
    }

    #[test]
    fn construction_rejects_asymmetric_input() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(SymMatrix::new(m).is_err());
        assert!(SymMatrix::new(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn cholesky_examples() {
        let l = cholesky(&SymMatrix::identity(4)).unwrap();
        assert_eq!(l, DMatrix::identity(4, 4));

        let l = cholesky(&sym(2, &[1.0, 0.9, 0.9, 1.0])).unwrap();
        assert!((l[(0, 0)] - 1.0).abs() < 1e-15);
        assert!((l[(1, 0)] - 0.9).abs() < 1e-15);
        assert!((l[(1, 1)] - 0.19f64.sqrt()).abs() < 1e-15);
        assert_eq!(l[(0, 1)], 0.0);

        assert!(matches!(
            cholesky(&sym(2, &[1.0, 2.0, 2.0, 1.0])),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        assert!(cholesky(&SymMatrix::zeros(2)).is_err());
    }

    #[test]
    fn steplength_examples() {
        let x = sym(2, &[1.0, 0.9, 0.9, 1.0]);
        let minus_i = -&SymMatrix::identity(2);
        let a = max_steplength(&x, &minus_i, StepSign::Plus).unwrap();
        assert!((a.as_f64() - 0.1).abs() < 1e-12);

        let i2 = SymMatrix::identity(2);
        let a = max_steplength(&i2, &minus_i, StepSign::Plus).unwrap();
        assert!((a.as_f64() - 1.0).abs() < 1e-15);
        assert_eq!(
            max_steplength(&i2, &i2, StepSign::Plus).unwrap(),
            Steplength::Infinite
        );
        // the minus sign flips the direction
        let a = max_steplength(&i2, &i2, StepSign::Minus).unwrap();
        assert!((a.as_f64() - 1.0).abs() < 1e-15);
        assert!(max_steplength(&sym(2, &[1.0, 2.0, 2.0, 1.0]), &i2, StepSign::Plus).is_err());
    }

    #[test]
    fn least_squares_examples() {
        let x = min_norm_least_squares(&DMatrix::identity(2, 2), &[3.0, 4.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-14 && (x[1] - 4.0).abs() < 1e-14);

        let a = DMatrix::from_row_slice(1, 2, &[1.0, 1.0]);
        let x = min_norm_least_squares(&a, &[2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 1.0).abs() < 1e-14);

        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 0.0]);
        let x = min_norm_least_squares(&a, &[1.0, 3.0]).unwrap();
        assert!((x[0] - 2.0).abs() < 1e-14 && x[1].abs() < 1e-14);

        assert!(min_norm_least_squares(&a, &[1.0]).is_err());
        let x = min_norm_least_squares(&DMatrix::zeros(0, 3), &[]).unwrap();
        assert_eq!(x.len(), 3);
    }

    #[test]
    fn symmetrize_examples() {
        let d = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        assert_eq!(symmetrize(&d).unwrap(), sym(2, &[0.0, 1.0, 1.0, 0.0]));
        let s = sym(3, &[1., 2., 3., 2., 4., 5., 3., 5., 6.]);
        assert_eq!(symmetrize(s.as_matrix()).unwrap(), s);
        assert!(symmetrize(&DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn kron_identity_applies_left_product() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let y = DMatrix::from_row_slice(2, 2, &[5.0, 6.0, 7.0, 8.0]);
        let lhs = kron_identity(&x) * vec(&y);
        assert_eq!(lhs, vec(&(&x * &y)));
    }

    #[test]
    fn inverse_is_symmetric() {
        let x = sym(3, &[4., 1., 0.5, 1., 3., 0.2, 0.5, 0.2, 2.]);
        let xi = x.inverse().unwrap();
        let prod = x.as_matrix() * xi.as_matrix();
        assert!((prod - DMatrix::identity(3, 3)).norm() < 1e-14);
        assert_eq!(xi.as_matrix(), &xi.as_matrix().transpose());
    }
}
