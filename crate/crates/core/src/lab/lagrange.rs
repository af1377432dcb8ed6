use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for the unit-norm precondition and the identity.
pub const LAGRANGE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagrangeCheck {
    /// `|v|^2`.
    pub lhs: f64,
    /// `(u·v)^2 + Σ_{i<j} (u_i v_j - u_j v_i)^2`.
    pub rhs: f64,
    pub equal: bool,
    /// `|v|` against `√(1 + N(N-1)/2) (|u·v| + max_ω |u^j ω_ij v^i|)`.
    pub bound_lhs: f64,
    pub bound_rhs: f64,
    pub bound_holds: bool,
}

/// Splits `v` into its radial part along the unit vector `u` and the
/// rotational parts `u_i v_j - u_j v_i`.
pub fn lagrange_check(u: &[f64], v: &[f64]) -> Result<LagrangeCheck> {
    if u.len() != v.len() || u.len() < 2 {
        return Err(Error::ShapeMismatch(format!(
            "vectors of length {} and {}",
            u.len(),
            v.len()
        )));
    }
    let norm = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > LAGRANGE_TOL {
        return Err(Error::NotUnit { site: 0, norm });
    }
    let n = u.len();
    let radial: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let mut cross_sq = 0.0;
    let mut cross_max = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            let c = u[i] * v[j] - u[j] * v[i];
            cross_sq += c * c;
            cross_max = cross_max.max(c.abs());
        }
    }
    let lhs: f64 = v.iter().map(|a| a * a).sum();
    let rhs = radial * radial + cross_sq;
    let constant = (1.0 + (n * (n - 1) / 2) as f64).sqrt();
    let bound_lhs = lhs.sqrt();
    let bound_rhs = constant * (radial.abs() + cross_max);
    Ok(LagrangeCheck {
        lhs,
        rhs,
        equal: (lhs - rhs).abs() <= LAGRANGE_TOL * lhs.max(1.0),
        bound_lhs,
        bound_rhs,
        bound_holds: bound_lhs <= bound_rhs * (1.0 + LAGRANGE_TOL),
    })
}
