//! Discrete Besov–Slobodeckij energy and the quantities derived from it.
//!
//! All sums run over ordered pairs of distinct sites `x ≠ y` of a region with
//! weights `w_xy = h^{2n} / |x - y|^{n+sp}` (torus metric). Outer sums are
//! evaluated per site in parallel and reduced sequentially in site order, so
//! results do not depend on the number of worker threads.

mod euler_lagrange;
mod functional;
mod holefill;
mod kernel;
mod t_operator;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BallHierarchy, GridSpec};

pub use euler_lagrange::{el_residual, SignMatrix};
pub use functional::{
    energy, energy_gradient, energy_regularized, first_variation, seminorm,
};
pub use holefill::{holefill_check, HoleFill};
pub use kernel::{KernelMode, PairKernelCache, STREAMING_THRESHOLD};
pub use t_operator::{
    duality_sides, orthogonality_forms, riesz_kernel, t_operator, DualitySides, RieszQuadrature,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrature {
    #[default]
    FullDoubleSum,
}

/// Analytic parameters of the energy plus regularisation control.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParams {
    dim: usize,
    s: f64,
    p: f64,
    eps_reg: f64,
    critical_mode: bool,
    quadrature: Quadrature,
}

impl EnergyParams {
    /// `p` defaults to the critical exponent `n / s`; with `critical_mode`
    /// any other explicit `p` is rejected.
    pub fn new(
        dim: usize,
        s: f64,
        p: Option<f64>,
        eps_reg: f64,
        critical_mode: bool,
    ) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::param("s", s, "needs s in (0, 1)"));
        }
        let critical = dim as f64 / s;
        let p = match p {
            None => critical,
            Some(p) if critical_mode && p != critical => {
                return Err(Error::param(
                    "p",
                    p,
                    format!("critical mode requires p = n/s = {critical}"),
                ));
            }
            Some(p) => p,
        };
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::param("p", p, "needs p > 1"));
        }
        if !(eps_reg >= 0.0 && eps_reg.is_finite()) {
            return Err(Error::param("eps_reg", eps_reg, "needs eps_reg >= 0"));
        }
        if eps_reg == 0.0 && p < 2.0 {
            return Err(Error::param(
                "eps_reg",
                eps_reg,
                format!("eps_reg = 0 is only allowed for p >= 2 (p = {p})"),
            ));
        }
        Ok(Self {
            dim,
            s,
            p,
            eps_reg,
            critical_mode,
            quadrature: Quadrature::FullDoubleSum,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn eps_reg(&self) -> f64 {
        self.eps_reg
    }

    pub fn critical_mode(&self) -> bool {
        self.critical_mode
    }

    pub fn quadrature(&self) -> Quadrature {
        self.quadrature
    }

    /// Kernel exponent `n + sp`.
    pub fn kernel_exponent(&self) -> f64 {
        self.dim as f64 + self.s * self.p
    }

    /// Lower admissibility bound `1 - (1 - s) p` for the order of `T_{B,t}`.
    pub fn t_lower_bound(&self) -> f64 {
        1.0 - (1.0 - self.s) * self.p
    }

    pub(crate) fn check_grid(&self, grid: &GridSpec) -> Result<()> {
        if grid.dim() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "energy parameters built for n = {}, grid has n = {}",
                self.dim,
                grid.dim()
            )));
        }
        Ok(())
    }
}

/// Integration region of a double sum.
#[derive(Debug, Clone, Copy)]
pub enum Region<'a> {
    Torus,
    Ball(&'a BallHierarchy, i32),
}

impl Region<'_> {
    pub fn sites(&self, grid: &GridSpec) -> Result<Vec<usize>> {
        match self {
            Region::Torus => Ok((0..grid.len()).collect()),
            Region::Ball(h, level) => {
                grid.check_same(h.grid())?;
                h.sites(*level)
            }
        }
    }
}

/// `Σ_x f(x)` with the per-site terms computed in parallel and added in
/// index order.
pub(crate) fn ordered_sum<F>(sites: &[usize], f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let parts: Vec<f64> = sites.par_iter().map(|&x| f(x)).collect();
    parts.iter().sum()
}

/// `|a - b|^2` for two sample vectors.
#[inline]
pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `|d|^{p-2}` from `|d|^2`, with `0^{p-2} := 0` (the factor always
/// multiplies a difference that vanishes with it).
#[inline]
pub(crate) fn degenerate_factor(d2: f64, p: f64) -> f64 {
    if p == 2.0 {
        1.0
    } else if d2 == 0.0 {
        0.0
    } else {
        d2.powf(0.5 * (p - 2.0))
    }
}

/// `|d|^p` from `|d|^2`.
#[inline]
pub(crate) fn power_from_sq(d2: f64, p: f64) -> f64 {
    if p == 2.0 {
        d2
    } else {
        d2.powf(0.5 * p)
    }
}
