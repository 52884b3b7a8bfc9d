//! Splits the space of `n × n` matrices, relative to an SDP's constraints and
//! objective, into degrees of freedom (ξ), minimization directions (η) and
//! non-symmetric directions (ν). The constraint span (ζ) is the orthogonal
//! complement of the other three inside the symmetric matrices and is not
//! stored.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::{full_svd, DenseMatrix, SymMatrix};
use crate::sdp::SdpProblem;

/// Default relative threshold for rank and classification decisions.
pub const DEFAULT_DECOMP_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Decomposition {
    n: usize,
    /// Stacked constraints, row `i` is `vec(A_i)ᵀ`.
    constraints: DenseMatrix,
    xi: DenseMatrix,
    eta: DenseMatrix,
    nu: DenseMatrix,
}

impl Decomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.constraints.nrows()
    }

    pub fn m_xi(&self) -> usize {
        self.xi.ncols()
    }

    pub fn m_eta(&self) -> usize {
        self.eta.ncols()
    }

    pub fn m_nu(&self) -> usize {
        self.nu.ncols()
    }

    /// Basis of the degrees of freedom, `n² × m_ξ`.
    pub fn xi(&self) -> &DenseMatrix {
        &self.xi
    }

    /// Basis of the minimization directions, `n² × m_η`.
    pub fn eta(&self) -> &DenseMatrix {
        &self.eta
    }

    /// Basis of the antisymmetric matrices, `n² × n(n−1)/2`.
    pub fn nu(&self) -> &DenseMatrix {
        &self.nu
    }

    pub fn constraint_matrix(&self) -> &DenseMatrix {
        &self.constraints
    }

    /// `[M_ξ, M_η]`
    pub fn symmetric_directions(&self) -> DenseMatrix {
        hcat(&[&self.xi, &self.eta], self.n * self.n)
    }

    /// `[M_ξ, M_η, M_ν]`
    pub fn all_directions(&self) -> DenseMatrix {
        hcat(&[&self.xi, &self.eta, &self.nu], self.n * self.n)
    }

    /// `[M_η, M_ν]`
    pub fn eta_nu(&self) -> DenseMatrix {
        hcat(&[&self.eta, &self.nu], self.n * self.n)
    }

    /// Column `j` of `M_ξ` as a symmetric matrix.
    pub fn xi_matrix(&self, j: usize) -> SymMatrix {
        column_matrix(&self.xi, j, self.n)
    }

    pub fn eta_matrix(&self, j: usize) -> SymMatrix {
        column_matrix(&self.eta, j, self.n)
    }
}

fn column_matrix(m: &DenseMatrix, j: usize, n: usize) -> SymMatrix {
    let col: DVector<f64> = m.column(j).into_owned();
    crate::linalg::sym_of_vec(&col, n)
}

pub(crate) fn hcat(parts: &[&DenseMatrix], rows: usize) -> DenseMatrix {
    let cols: usize = parts.iter().map(|p| p.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let mut c = 0;
    for p in parts {
        if p.ncols() > 0 {
            out.view_mut((0, c), (rows, p.ncols())).copy_from(*p);
        }
        c += p.ncols();
    }
    out
}

/// Orthonormal basis of the symmetric matrices in `vec` coordinates:
/// `e_ii` and `(e_ij + e_ji)/√2` for `i < j`, ordered column by column.
pub fn symmetric_chart(n: usize) -> DenseMatrix {
    let d = n * (n + 1) / 2;
    let mut s = DMatrix::zeros(n * n, d);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut c = 0;
    for j in 0..n {
        for i in 0..=j {
            if i == j {
                s[(j * n + i, c)] = 1.0;
            } else {
                s[(j * n + i, c)] = r;
                s[(i * n + j, c)] = r;
            }
            c += 1;
        }
    }
    s
}

/// Orthonormal antisymmetric basis `(e_ij − e_ji)/√2`, `i < j`, lexicographic in `(i, j)`.
pub fn nonsym_basis(n: usize) -> DenseMatrix {
    let mut b = DMatrix::zeros(n * n, n * (n.saturating_sub(1)) / 2);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut c = 0;
    for i in 0..n {
        for j in i + 1..n {
            // entry (i, j) sits at j*n + i in column-major order
            b[(j * n + i, c)] = r;
            b[(i * n + j, c)] = -r;
            c += 1;
        }
    }
    b
}

/// Stacked constraint matrix with rows `vec(A_i)ᵀ`.
pub fn stack_constraints(problem: &SdpProblem) -> DenseMatrix {
    let n = problem.n();
    let mut a = DMatrix::zeros(problem.m(), n * n);
    for (i, ai) in problem.constraints().iter().enumerate() {
        a.row_mut(i).copy_from_slice(ai.as_matrix().as_slice());
    }
    a
}

pub fn decompose(problem: &SdpProblem, tol: f64) -> Result<Decomposition> {
    let n = problem.n();
    let m = problem.m();
    let d = n * (n + 1) / 2;
    let chart = symmetric_chart(n);
    let constraints = stack_constraints(problem);

    let null = if m == 0 {
        DMatrix::identity(d, d)
    } else {
        let svd = full_svd(&(&constraints * &chart))?;
        let sigma_max = svd.s.first().copied().unwrap_or(0.0);
        let threshold = tol * sigma_max;
        let rank = svd.s.iter().filter(|&&s| s > threshold).count();
        if rank < m || sigma_max == 0.0 {
            return Err(Error::RankDeficient {
                rank: if sigma_max == 0.0 { 0 } else { rank },
                rows: m,
                deficient: m - rank.min(m),
            });
        }
        // right singular vectors beyond the rank span the null space
        svd.v.columns(rank, d - rank).into_owned()
    };

    let basis = &chart * canonical_basis(&null);
    let c = problem.objective().vec();
    let c_norm = c.norm();

    let mut xi_cols = Vec::new();
    let mut eta_cols = Vec::new();
    for j in 0..basis.ncols() {
        let col = basis.column(j).into_owned();
        if c_norm > 0.0 && col.dot(&c).abs() > tol * c_norm {
            eta_cols.push(col);
        } else {
            xi_cols.push(col);
        }
    }
    let to_matrix = |cols: &[DVector<f64>]| {
        let mut m = DMatrix::zeros(n * n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            m.set_column(j, c);
        }
        m
    };

    Ok(Decomposition {
        n,
        constraints,
        xi: to_matrix(&xi_cols),
        eta: to_matrix(&eta_cols),
        nu: nonsym_basis(n),
    })
}

/// Deterministic orthonormal basis of the column span of `v`: reduced row
/// echelon form of `vᵀ` (leftmost pivots first), then Gram–Schmidt in pivot order.
fn canonical_basis(v: &DenseMatrix) -> DenseMatrix {
    let (d, k) = v.shape();
    let mut rows = v.transpose();
    let mut r = 0;
    for c in 0..d {
        if r == k {
            break;
        }
        let (p, pv) = (r..k)
            .map(|i| (i, rows[(i, c)].abs()))
            .fold(
                (r, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        if pv < 1e-9 {
            continue;
        }
        rows.swap_rows(r, p);
        let pivot = rows[(r, c)];
        let scaled = rows.row(r) / pivot;
        rows.set_row(r, &scaled);
        for i in 0..k {
            if i != r {
                let f = rows[(i, c)];
                if f != 0.0 {
                    let upd = rows.row(i) - rows.row(r) * f;
                    rows.set_row(i, &upd);
                }
            }
        }
        r += 1;
    }
    let mut out = DMatrix::<f64>::zeros(d, k);
    for i in 0..k {
        let mut col: DVector<f64> = rows.row(i).transpose();
        // two passes keep the basis orthonormal to working precision
        for _ in 0..2 {
            for j in 0..i {
                let q = out.column(j);
                let proj = q.dot(&col);
                col -= q * proj;
            }
        }
        let norm = col.norm();
        out.set_column(i, &(col / norm));
    }
    out
}
