//! Moving a positive definite iterate away from the boundary of the cone
//! along objective-neutral directions.

use crate::error::{Error, Result};
use crate::linalg::{
    damped_least_squares, kron_identity, max_steplength, sym_of_vec, vec, DenseMatrix, StepSign,
    SymMatrix,
};

/// Maximum number of times a correction is halved to keep the result definite.
pub const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone)]
pub struct CenteringResult {
    pub x: SymMatrix,
    /// Frobenius norm of the correction actually applied.
    pub correction_norm: f64,
    pub inv_norm_before: f64,
    pub inv_norm_after: f64,
}

/// Per-column coefficients `½(β⁺ − β⁻)` of the geometric centering correction,
/// all evaluated at `x`.
pub fn geometric_coefficients(x: &SymMatrix, m_xi: &DenseMatrix) -> Result<Vec<f64>> {
    let n = x.n();
    check_basis(x, m_xi)?;
    let mut coeffs = Vec::with_capacity(m_xi.ncols());
    for j in 0..m_xi.ncols() {
        let dir = sym_of_vec(&m_xi.column(j).into_owned(), n);
        let plus = max_steplength(x, &dir, StepSign::Plus)?;
        let minus = max_steplength(x, &dir, StepSign::Minus)?;
        match (plus.value(), minus.value()) {
            (Some(p), Some(m)) => coeffs.push(0.5 * (p - m)),
            _ => return Err(Error::UnboundedFreedom { column: j }),
        }
    }
    Ok(coeffs)
}

/// Shifts `x` to the midpoint of its feasible segment along every column of `m_xi`.
pub fn geometric_center(x: &SymMatrix, m_xi: &DenseMatrix) -> Result<CenteringResult> {
    let n = x.n();
    let coeffs = geometric_coefficients(x, m_xi)?;
    let mut correction = SymMatrix::zeros(n);
    for (j, c) in coeffs.iter().enumerate() {
        let dir = sym_of_vec(&m_xi.column(j).into_owned(), n);
        correction = correction.axpy(*c, &dir);
    }
    apply_with_halving(x, &correction)
}

/// One linearized step towards the minimizer of `‖X⁻¹‖_F` over `x + span(m_xi)`.
///
/// `mu = 1` leaves `x` unchanged, `mu = 0` takes the full correction.
pub fn algebraic_center(x: &SymMatrix, m_xi: &DenseMatrix, mu: f64) -> Result<CenteringResult> {
    if m_xi.ncols() == 0 {
        return Err(Error::NoFreedom);
    }
    linearized_center(x, m_xi, mu)
}

/// Solves `[(I⊗X̃)M, I⊗X] [x̂; Δx̃] = (1−μ) vec(X̃)` for an arbitrary direction
/// basis `M` and applies the symmetrized correction `mat(M x̂)`.
///
/// The system is consistent since `I⊗X` is invertible; eliminating
/// `Δx̃ = (1−μ) vec(X̃²) − (I⊗X̃²) M x̂` leaves a damped least-squares problem
/// whose solution is the minimum-norm one.
pub(crate) fn linearized_center(
    x: &SymMatrix,
    m: &DenseMatrix,
    mu: f64,
) -> Result<CenteringResult> {
    check_basis(x, m)?;
    let n = x.n();
    let inv = x.inverse()?;
    if m.ncols() == 0 || mu == 1.0 {
        let norm = inv.frobenius_norm();
        return Ok(CenteringResult {
            x: x.clone(),
            correction_norm: 0.0,
            inv_norm_before: norm,
            inv_norm_after: norm,
        });
    }
    let inv_sq = inv.as_matrix() * inv.as_matrix();
    let weighted = kron_identity(&inv_sq) * m;
    let target = vec(&inv_sq) * (1.0 - mu);
    let coeffs = damped_least_squares(&weighted, &target);
    let correction = sym_of_vec(&(m * coeffs), n);
    apply_with_halving(x, &correction)
}

fn check_basis(x: &SymMatrix, m: &DenseMatrix) -> Result<()> {
    if m.nrows() != x.n() * x.n() {
        return Err(Error::dim(format!(
            "direction basis has {} rows, expected {}",
            m.nrows(),
            x.n() * x.n()
        )));
    }
    Ok(())
}

fn apply_with_halving(x: &SymMatrix, correction: &SymMatrix) -> Result<CenteringResult> {
    let before = x.inverse()?.frobenius_norm();
    let mut scale = 1.0;
    for _ in 0..=MAX_HALVINGS {
        let candidate = x.axpy(scale, correction);
        if let Ok(inv) = candidate.inverse() {
            return Ok(CenteringResult {
                x: candidate,
                correction_norm: scale * correction.frobenius_norm(),
                inv_norm_before: before,
                inv_norm_after: inv.frobenius_norm(),
            });
        }
        scale *= 0.5;
    }
    Err(Error::CenteringFailed {
        halvings: MAX_HALVINGS,
    })
}

/// `vec` of `[[0,1],[1,0]]/√2`, the freedom direction of the 2×2 examples.
#[cfg(test)]
pub(crate) fn off_diagonal_direction() -> DenseMatrix {
    use nalgebra::DMatrix;
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_column_slice(4, 1, &[0.0, r, r, 0.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn near_singular() -> SymMatrix {
        // X + α ΔX with X = [[1, 0.9], [0.9, 1]], ΔX = −I, α = (1 − 1e-10)·0.1
        let x = SymMatrix::from_row_slice(2, &[1.0, 0.9, 0.9, 1.0]).unwrap();
        x.axpy(-(1.0 - 1e-10) * 0.1, &SymMatrix::identity(2))
    }

    #[test]
    fn geometric_coefficients_near_boundary() {
        let mxi = off_diagonal_direction();
        let c = geometric_coefficients(&near_singular(), &mxi).unwrap();
        // with the unit-norm column the steplengths are √2 times the [[0,1],[1,0]] ones
        let unnormalized = c[0] / std::f64::consts::SQRT_2;
        assert!((unnormalized + 0.9).abs() < 1e-2, "{unnormalized}");
    }

    #[test]
    fn geometric_center_without_freedom_is_identity_map() {
        let x = near_singular();
        let r = geometric_center(&x, &DMatrix::zeros(4, 0)).unwrap();
        assert_eq!(r.x, x);
        assert_eq!(r.correction_norm, 0.0);
    }

    #[test]
    fn geometric_center_of_balanced_point_is_unchanged() {
        let x = SymMatrix::identity(2);
        let r = geometric_center(&x, &off_diagonal_direction()).unwrap();
        assert!(r.correction_norm < 1e-14);
    }

    #[test]
    fn unbounded_freedom_is_reported() {
        let mxi = DMatrix::from_column_slice(4, 1, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(
            geometric_center(&SymMatrix::identity(2), &mxi),
            Err(Error::UnboundedFreedom { column: 0 })
        ));
    }

    #[test]
    fn algebraic_center_near_boundary() {
        let r = algebraic_center(&near_singular(), &off_diagonal_direction(), 0.0).unwrap();
        let expected = SymMatrix::from_row_slice(2, &[0.9, -0.1, -0.1, 0.9]).unwrap();
        assert!((&r.x - &expected).frobenius_norm() < 5e-3, "{:?}", r.x);
        assert!((r.inv_norm_after - 1.6008).abs() < 5e-3);
        assert!(r.inv_norm_before > 1e9);
    }

    #[test]
    fn algebraic_center_mu_one_and_centered_input() {
        let x = near_singular();
        let r = algebraic_center(&x, &off_diagonal_direction(), 1.0).unwrap();
        assert_eq!(r.x, x);
        let r = algebraic_center(&SymMatrix::identity(2), &off_diagonal_direction(), 0.0).unwrap();
        assert!(r.correction_norm < 1e-14);
    }

    #[test]
    fn algebraic_center_requires_freedom() {
        assert!(matches!(
            algebraic_center(&SymMatrix::identity(2), &DMatrix::zeros(4, 0), 0.0),
            Err(Error::NoFreedom)
        ));
    }
}
