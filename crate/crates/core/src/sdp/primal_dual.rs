use nalgebra::{DMatrix, DVector};

use super::SdpProblem;
use crate::decomp::stack_constraints;
use crate::error::{Error, Result};
use crate::linalg::{kron_identity, min_norm_least_squares, sym_of_vec, DenseMatrix, SymMatrix};

/// A primal-dual pair `(X, y, Z)`.
#[derive(Debug, Clone)]
pub struct PdPoint {
    pub x: SymMatrix,
    pub y: Vec<f64>,
    pub z: SymMatrix,
}

#[derive(Debug, Clone)]
pub struct PdDirection {
    pub dx: SymMatrix,
    pub dy: Vec<f64>,
    pub dz: SymMatrix,
}

/// Assembles the primal-dual system with invertibility rows for `X` and `Z`.
///
/// Unknowns are `[Δx, Δy, Δz, Δx̃, Δz̃]`; block rows are, in order,
/// dual feasibility (`n²`), primal feasibility (`m`), the complementarity
/// target (1), and the invertibility conditions for `X` and `Z` (`n²` each).
pub fn pd_system(
    point: &PdPoint,
    problem: &SdpProblem,
    mu: f64,
) -> Result<(DenseMatrix, Vec<f64>)> {
    let n = problem.n();
    let m = problem.m();
    let nn = n * n;
    if point.x.n() != n || point.z.n() != n || point.y.len() != m {
        return Err(Error::dim("primal-dual point does not match the problem"));
    }
    let x_inv = point.x.inverse()?;
    let z_inv = point.z.inverse()?;
    let a = stack_constraints(problem);
    let x = point.x.vec();
    let z = point.z.vec();
    let y = DVector::from_column_slice(&point.y);

    let (cy, cz, cxt, czt) = (nn, nn + m, 2 * nn + m, 3 * nn + m);
    let (r_primal, r_comp, r_x, r_z) = (nn, nn + m, nn + m + 1, 2 * nn + m + 1);
    let rows = 3 * nn + m + 1;
    let mut k = DMatrix::zeros(rows, 4 * nn + m);

    k.view_mut((0, cy), (nn, m)).copy_from(&a.transpose());
    k.view_mut((0, cz), (nn, nn)).fill_with_identity();
    k.view_mut((r_primal, 0), (m, nn)).copy_from(&a);
    k.view_mut((r_comp, 0), (1, nn)).copy_from(&z.transpose());
    k.view_mut((r_comp, cz), (1, nn)).copy_from(&x.transpose());
    k.view_mut((r_x, 0), (nn, nn))
        .copy_from(&kron_identity(x_inv.as_matrix()));
    k.view_mut((r_x, cxt), (nn, nn))
        .copy_from(&kron_identity(point.x.as_matrix()));
    k.view_mut((r_z, cz), (nn, nn))
        .copy_from(&kron_identity(z_inv.as_matrix()));
    k.view_mut((r_z, czt), (nn, nn))
        .copy_from(&kron_identity(point.z.as_matrix()));

    let mut rhs = vec![0.0; rows];
    let dual = problem.objective().vec() - &z - a.transpose() * &y;
    rhs[..nn].copy_from_slice(dual.as_slice());
    for (i, (ai, bi)) in problem.constraints().iter().zip(problem.b()).enumerate() {
        rhs[r_primal + i] = bi - ai.dot(&point.x);
    }
    rhs[r_comp] = mu - point.x.dot(&point.z);
    Ok((k, rhs))
}

/// One-shot non-commutative primal-dual direction.
pub fn pd_newdir_solve(point: &PdPoint, problem: &SdpProblem, mu: f64) -> Result<PdDirection> {
    let (k, rhs) = pd_system(point, problem, mu)?;
    let sol = min_norm_least_squares(&k, &rhs)?;
    let n = problem.n();
    let nn = n * n;
    let m = problem.m();
    Ok(PdDirection {
        dx: sym_of_vec(&sol.rows(0, nn).into_owned(), n),
        dy: sol.rows(nn, m).iter().copied().collect(),
        dz: sym_of_vec(&sol.rows(nn + m, nn).into_owned(), n),
    })
}
