use crate::linalg::SymMatrix;

/// Coordinates `(ξ, η)` of `x` in the plane spanned by a freedom direction
/// `u_xi` (relative to `x_ref`) and the objective value.
pub fn path_projection(
    x: &SymMatrix,
    x_ref: &SymMatrix,
    u_xi: &SymMatrix,
    c: &SymMatrix,
) -> (f64, f64) {
    let xi = (x - x_ref).dot(u_xi) / u_xi.dot(u_xi);
    (xi, c.dot(x))
}
