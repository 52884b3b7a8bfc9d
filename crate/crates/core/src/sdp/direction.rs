use crate::error::{Error, Result};
use crate::linalg::{kron_identity, normalized_min_norm, sym_of_vec, DenseMatrix, SymMatrix};

/// Minimization direction in `span(M)` that keeps `X + ΔX` invertible to first
/// order and is normalized to `⟨C, ΔX⟩ = −γ`.
///
/// The system is `[(I⊗X̃)M, I⊗X; vec(C)ᵀM, 0] [x̂; Δx̃] = [0; −γ]`. Its first
/// block row fixes `Δx̃ = −(I⊗X̃²) M x̂`, so the minimum-norm solution minimizes
/// `‖x̂‖² + ‖(I⊗X̃²) M x̂‖²` under the normalization. Returns the symmetric
/// part of `mat(M x̂)`.
pub fn sdp_search_direction(
    x: &SymMatrix,
    m: &DenseMatrix,
    c: &SymMatrix,
    gamma: f64,
) -> Result<SymMatrix> {
    let n = x.n();
    let nn = n * n;
    if m.nrows() != nn || c.n() != n {
        return Err(Error::dim("direction basis does not match the iterate"));
    }
    let slope = m.transpose() * c.vec();
    if m.ncols() == 0 || slope.norm() <= 1e-14 * c.frobenius_norm().max(f64::MIN_POSITIVE) {
        return Err(Error::AlreadyOptimal);
    }
    let inv = x.inverse()?;
    let weighted = kron_identity(&(inv.as_matrix() * inv.as_matrix())) * m;
    let coeffs = normalized_min_norm(&weighted, &slope, -gamma).ok_or(Error::AlreadyOptimal)?;
    Ok(sym_of_vec(&(m * coeffs), n))
}

/// Direction from the iterate with the larger objective to the one with the
/// smaller objective; `None` when both objectives coincide.
pub fn constructed_direction(
    prev_center: &SymMatrix,
    cur_center: &SymMatrix,
    c: &SymMatrix,
) -> Option<SymMatrix> {
    let f_prev = c.dot(prev_center);
    let f_cur = c.dot(cur_center);
    let scale = f_prev.abs().max(f_cur.abs()).max(f64::MIN_POSITIVE);
    if (f_prev - f_cur).abs() <= 4.0 * f64::EPSILON * scale {
        return None;
    }
    if f_cur < f_prev {
        Some(cur_center - prev_center)
    } else {
        Some(prev_center - cur_center)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{decompose, DEFAULT_DECOMP_TOL};
    use crate::io::fixtures;

    #[test]
    fn constructed_direction_points_downhill() {
        let c = SymMatrix::from_diagonal(&[1.0, 0.0]);
        let x1 = SymMatrix::from_diagonal(&[2.0, 1.0]);
        let x2 = SymMatrix::from_diagonal(&[1.0, 1.0]);
        let d = constructed_direction(&x1, &x2, &c).unwrap();
        assert_eq!(d, SymMatrix::from_diagonal(&[-1.0, 0.0]));
        assert_eq!(constructed_direction(&x2, &x1, &c).unwrap(), d);
        assert!(constructed_direction(&x1, &x1, &c).is_none());
    }

    #[test]
    fn sos_direction_is_normalized_and_feasible() {
        let p = fixtures::sos_example();
        let d = decompose(&p, DEFAULT_DECOMP_TOL).unwrap();
        let x = fixtures::sos_start(0.75, 2.0);
        for m in [d.all_directions(), d.symmetric_directions()] {
            let dx = sdp_search_direction(&x, &m, p.objective(), 0.1).unwrap();
            assert!((p.objective().dot(&dx) + 0.1).abs() < 1e-9);
            for a in p.constraints() {
                assert!(a.dot(&dx).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn objective_orthogonal_to_directions() {
        let p = fixtures::sos_example();
        let d = decompose(&p, DEFAULT_DECOMP_TOL).unwrap();
        let x = fixtures::sos_start(0.75, 2.0);
        assert!(matches!(
            sdp_search_direction(&x, d.xi(), p.objective(), 0.1),
            Err(Error::AlreadyOptimal)
        ));
    }
}
