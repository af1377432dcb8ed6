use serde::{Deserialize, Serialize};

use super::{dist2, energy, power_from_sq, EnergyParams, KernelMode, PairKernelCache, Region};
use crate::error::{Error, Result};
use crate::grid::{BallHierarchy, VectorField};

/// Absolute slack allowed on the right-hand side.
pub const HOLEFILL_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoleFill {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// `Σ_{x ∈ B_L} Σ_{y ∈ B_L \ B_K} w |Δ|^p` against `[u]_L^p - [u]_K^p`.
pub fn holefill_check(
    u: &VectorField,
    hierarchy: &BallHierarchy,
    inner: i32,
    outer: i32,
    params: &EnergyParams,
) -> Result<HoleFill> {
    if inner >= outer {
        return Err(Error::LevelOutOfRange {
            level: inner,
            min: hierarchy.level_range().0,
            max: outer - 1,
        });
    }
    params.check_grid(u.grid())?;
    let big = hierarchy.sites(outer)?;
    let small = hierarchy.sites(inner)?;
    let kernel = PairKernelCache::new(*u.grid(), params.kernel_exponent(), KernelMode::Auto);
    let p = params.p();
    let annulus: Vec<usize> = big
        .iter()
        .copied()
        .filter(|&y| !hierarchy.contains(inner, y))
        .collect();
    let mut lhs = 0.0;
    for &x in &big {
        let ux = u.at(x);
        for &y in &annulus {
            if y != x {
                lhs += kernel.weight(x, y) * power_from_sq(dist2(ux, u.at(y)), p);
            }
        }
    }
    let rhs = energy(u, params, &Region::Ball(hierarchy, outer))?
        - energy(u, params, &Region::Ball(hierarchy, inner))?;
    debug_assert!(small.len() + annulus.len() == big.len());
    Ok(HoleFill {
        lhs,
        rhs,
        pass: lhs <= rhs + HOLEFILL_SLACK,
    })
}
