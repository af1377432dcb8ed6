//! Fractional Laplacian `Λ^t`, Riesz potential `Λ^{-t}`, Littlewood–Paley
//! projections and the three-term commutator on the periodic grid.
//!
//! The spectral multipliers `|ξ|^{±t}` are the reference implementation. The
//! singular-integral variant of `Λ^t` exists to cross-check the kernel
//! handling shared with the energy sums.

mod commutator;
mod littlewood_paley;
mod singular;
mod spectrum;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ScalarField, VectorField};

pub use commutator::commutator_h;
pub use littlewood_paley::{lp_profile, lp_project, lp_project_chain, lp_sup_bound_probe, LPBank, LpSupRow};
pub use spectrum::{apply_multiplier, Spectrum};

/// Mean magnitude tolerated by [`riesz_potential`].
pub const MEAN_ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FracVariant {
    Spectral,
    SingularIntegral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracOpParams {
    pub order: f64,
    pub variant: FracVariant,
}

impl FracOpParams {
    pub fn spectral(order: f64) -> Self {
        Self {
            order,
            variant: FracVariant::Spectral,
        }
    }

    pub fn singular(order: f64) -> Self {
        Self {
            order,
            variant: FracVariant::SingularIntegral,
        }
    }
}

/// Multiplier `|ξ|^t` with the zero mode annihilated; `t = 0` is the identity.
/// Negative `t` gives the Riesz potential without the mean check.
pub fn spectral_power(f: &ScalarField, t: f64) -> ScalarField {
    if t == 0.0 {
        return f.clone();
    }
    apply_multiplier(f, |xi| if xi == 0.0 { 0.0 } else { xi.powf(t) })
}

/// `Λ^t f` for `t ∈ (0, 1)`.
pub fn frac_laplacian(f: &ScalarField, params: FracOpParams) -> Result<ScalarField> {
    let t = params.order;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::param("order", t, "Λ^t needs t in (0, 1)"));
    }
    Ok(match params.variant {
        FracVariant::Spectral => spectral_power(f, t),
        FracVariant::SingularIntegral => singular::singular_laplacian(f, t),
    })
}

/// Componentwise `Λ^t u`.
pub fn frac_laplacian_vec(u: &VectorField, params: FracOpParams) -> Result<VectorField> {
    let parts = (0..u.components())
        .map(|j| frac_laplacian(&u.component(j), params))
        .collect::<Result<Vec<_>>>()?;
    VectorField::from_components(&parts)
}

/// `Λ^{-t} F` for mean-zero `F` and `t ∈ (0, n)`.
pub fn riesz_potential(f: &ScalarField, t: f64) -> Result<ScalarField> {
    let n = f.grid().dim() as f64;
    if !(t > 0.0 && t < n) {
        return Err(Error::param("order", t, format!("Λ^{{-t}} needs t in (0, {n})")));
    }
    let mean = f.mean();
    if mean.abs() > MEAN_ZERO_TOL {
        return Err(Error::NonZeroMean { mean });
    }
    Ok(spectral_power(f, -t))
}
