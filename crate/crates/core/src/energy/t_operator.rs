//! The potential-type operator
//! `T_{B,t} u^i(z) = Σ_{x ≠ y ∈ B} w_xy |Δ|^{p-2} Δ^i (G(x - z) - G(y - z))`
//! with `G` a discretisation of the Riesz kernel `|·|^{t-n}`.
//!
//! Two discretisations of `G` are offered:
//!
//! * [`RieszQuadrature::Excluded`]: the plain minimum-image kernel with the
//!   coincident site dropped (`G(0) = 0`). Available in every dimension.
//! * [`RieszQuadrature::ZetaCorrected`] (`n = 1`): the periodised kernel
//!   `Σ_m |d + mL|^{t-1}` in its zeta-regularised form, with local weights at
//!   offsets `0` and `±h` chosen from the generalised Euler–Maclaurin
//!   expansion of `h Σ_{j≠0} |jh|^{t-1} f(jh)`. The pairing
//!   `h Σ_z G(x - z) g(z)` then reproduces the continuous Riesz convolution
//!   with an `O(h^{t+4})` error for smooth `g`.

use serde::{Deserialize, Serialize};

use super::functional::UNIT_TOL;
use super::{degenerate_factor, dist2, EnergyParams, KernelMode, PairKernelCache, Region};
use crate::error::{Error, Result};
use crate::frac::spectral_power;
use crate::grid::{GridSpec, ScalarField, VectorField};
use crate::special::{hurwitz_zeta, riemann_zeta, riesz_constant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RieszQuadrature {
    Excluded,
    ZetaCorrected,
}

impl RieszQuadrature {
    /// Zeta-corrected where available, plain exclusion otherwise.
    pub fn default_for(grid: &GridSpec) -> Self {
        if grid.dim() == 1 {
            RieszQuadrature::ZetaCorrected
        } else {
            RieszQuadrature::Excluded
        }
    }
}

fn check_order(t: f64, params: &EnergyParams) -> Result<()> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::param("t", t, "needs t in (0, 1)"));
    }
    let lower = params.t_lower_bound();
    if t <= lower {
        return Err(Error::param(
            "t",
            t,
            format!("admissibility requires t > 1 - (1 - s) p = {lower}"),
        ));
    }
    Ok(())
}

/// Riesz kernel values `G(off)` for every periodic offset site.
pub fn riesz_kernel(grid: &GridSpec, t: f64, quadrature: RieszQuadrature) -> Result<Vec<f64>> {
    let n = grid.dim() as f64;
    match quadrature {
        RieszQuadrature::Excluded => Ok((0..grid.len())
            .map(|off| {
                if off == 0 {
                    0.0
                } else {
                    grid.offset_length(off).powf(t - n)
                }
            })
            .collect()),
        RieszQuadrature::ZetaCorrected => {
            if grid.dim() != 1 {
                return Err(Error::InvalidGrid(
                    "zeta-corrected Riesz quadrature is only available for n = 1".into(),
                ));
            }
            let m = grid.points_per_axis();
            let l = grid.box_length();
            let h = grid.spacing();
            let s = 1.0 - t;
            let mut g: Vec<f64> = (0..m)
                .map(|k| {
                    if k == 0 {
                        0.0
                    } else {
                        let a = k as f64 / m as f64;
                        l.powf(t - 1.0) * (hurwitz_zeta(s, a) + hurwitz_zeta(s, 1.0 - a))
                    }
                })
                .collect();
            let z0 = riemann_zeta(1.0 - t);
            let z2 = riemann_zeta(-1.0 - t);
            let smooth_part = 2.0 * l.powf(t - 1.0) * z0;
            let ht = h.powf(t - 1.0);
            g[0] = smooth_part + 2.0 * (z2 - z0) * ht;
            g[1] -= z2 * ht;
            g[m - 1] -= z2 * ht;
            Ok(g)
        }
    }
}

/// Pair flux `A^i(x) = Σ_{y ∈ B, y ≠ x} w_xy |Δ|^{p-2} Δ^i`.
fn pair_flux(u: &VectorField, sites: &[usize], params: &EnergyParams) -> Vec<Vec<f64>> {
    let kernel = PairKernelCache::new(*u.grid(), params.kernel_exponent(), KernelMode::Auto);
    let p = params.p();
    let n = u.components();
    sites
        .iter()
        .map(|&x| {
            let ux = u.at(x);
            let mut acc = vec![0.0; n];
            for &y in sites {
                if y == x {
                    continue;
                }
                let uy = u.at(y);
                let c = kernel.weight(x, y) * degenerate_factor(dist2(ux, uy), p);
                for k in 0..n {
                    acc[k] += c * (ux[k] - uy[k]);
                }
            }
            acc
        })
        .collect()
}

/// `T_{B,t} u` at every site of the torus. Antisymmetry of the pair weights
/// reduces the double sum to `T(z) = 2 Σ_{x ∈ B} A(x) G(x - z)`.
pub fn t_operator(
    u: &VectorField,
    region: &Region,
    t: f64,
    params: &EnergyParams,
    quadrature: RieszQuadrature,
) -> Result<VectorField> {
    params.check_grid(u.grid())?;
    check_order(t, params)?;
    let grid = *u.grid();
    let g = riesz_kernel(&grid, t, quadrature)?;
    let sites = region.sites(&grid)?;
    let flux = pair_flux(u, &sites, params);
    let n = u.components();
    let mut out = VectorField::zeros(grid, n);
    for z in 0..grid.len() {
        let tz = out.at_mut(z);
        for (&x, ax) in sites.iter().zip(&flux) {
            let k = g[grid.offset(z, x)];
            for c in 0..n {
                tz[c] += 2.0 * ax[c] * k;
            }
        }
    }
    Ok(out)
}

/// Both sides of the duality pairing, per component `i`:
/// `lhs = ⟨Λ^t φ, T_{B,t} u^i⟩` and
/// `rhs = c Σ_{x ≠ y ∈ B} w_xy |Δ|^{p-2} Δ^i (φ(x) - φ(y))`, `c = 1 / c_Riesz`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualitySides {
    pub lhs: Vec<f64>,
    pub rhs: Vec<f64>,
    pub constant: f64,
}

impl DualitySides {
    /// `max_i |lhs_i - rhs_i| / max_i |rhs_i|`.
    pub fn relative_error(&self) -> f64 {
        let scale = self.rhs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let err = self
            .lhs
            .iter()
            .zip(&self.rhs)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        if scale == 0.0 {
            err
        } else {
            err / scale
        }
    }
}

pub fn duality_sides(
    u: &VectorField,
    phi: &ScalarField,
    region: &Region,
    t: f64,
    params: &EnergyParams,
    quadrature: RieszQuadrature,
) -> Result<DualitySides> {
    u.grid().check_same(phi.grid())?;
    let grid = *u.grid();
    let tu = t_operator(u, region, t, params, quadrature)?;
    let lap_phi = spectral_power(phi, t);
    let n = u.components();
    let lhs = (0..n).map(|i| lap_phi.inner(&tu.component(i))).collect();

    let sites = region.sites(&grid)?;
    let kernel = PairKernelCache::new(grid, params.kernel_exponent(), KernelMode::Auto);
    let p = params.p();
    let ph = phi.samples();
    let mut sums = vec![0.0; n];
    for &x in &sites {
        let ux = u.at(x);
        for &y in &sites {
            if y == x {
                continue;
            }
            let uy = u.at(y);
            let c = kernel.weight(x, y) * degenerate_factor(dist2(ux, uy), p) * (ph[x] - ph[y]);
            for i in 0..n {
                sums[i] += c * (ux[i] - uy[i]);
            }
        }
    }
    let constant = 1.0 / riesz_constant(grid.dim(), t);
    Ok(DualitySides {
        lhs,
        rhs: sums.into_iter().map(|v| constant * v).collect(),
        constant,
    })
}

/// `u(z)·T_{B,t} u(z)` next to its rewriting with
/// `Γ(x, y, z) = -(u(x) + u(y) - 2u(z)) / 2`, which holds for unit `u` because
/// `(u(x) - u(y))·(u(x) + u(y)) = 0`. The second form is summed directly.
pub fn orthogonality_forms(
    u: &VectorField,
    region: &Region,
    t: f64,
    params: &EnergyParams,
    quadrature: RieszQuadrature,
) -> Result<(ScalarField, ScalarField)> {
    let grid = *u.grid();
    let sites = region.sites(&grid)?;
    for &x in &sites {
        let norm = u.at(x).iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { site: x, norm });
        }
    }
    let tu = t_operator(u, region, t, params, quadrature)?;
    let direct: Vec<f64> = (0..grid.len())
        .map(|z| u.at(z).iter().zip(tu.at(z)).map(|(a, b)| a * b).sum())
        .collect();

    let g = riesz_kernel(&grid, t, quadrature)?;
    let kernel = PairKernelCache::new(grid, params.kernel_exponent(), KernelMode::Auto);
    let p = params.p();
    let n = u.components();
    let gamma_form: Vec<f64> = (0..grid.len())
        .map(|z| {
            let uz = u.at(z);
            let mut acc = 0.0;
            for &x in &sites {
                let ux = u.at(x);
                let gx = g[grid.offset(z, x)];
                for &y in &sites {
                    if y == x {
                        continue;
                    }
                    let uy = u.at(y);
                    let mut dot = 0.0;
                    for i in 0..n {
                        dot += (ux[i] - uy[i]) * -0.5 * (ux[i] + uy[i] - 2.0 * uz[i]);
                    }
                    let w = kernel.weight(x, y) * degenerate_factor(dist2(ux, uy), p);
                    acc += w * dot * (gx - g[grid.offset(z, y)]);
                }
            }
            acc
        })
        .collect();
    Ok((
        ScalarField::new(grid, direct)?,
        ScalarField::new(grid, gamma_form)?,
    ))
}
