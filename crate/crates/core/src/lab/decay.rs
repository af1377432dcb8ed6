use serde::{Deserialize, Serialize};

use crate::energy::{energy, EnergyParams, Region};
use crate::error::{Error, Result};
use crate::grid::{BallHierarchy, VectorField};

/// Balls with fewer sites are left out of the power-law fit.
pub const MIN_FIT_SITES: usize = 8;
/// Minimum number of levels a decay profile must span.
pub const MIN_DECAY_LEVELS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub level: i32,
    pub radius: f64,
    pub energy: f64,
    pub sites: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `log energy` against `log radius`; `None` when
    /// fewer than two levels qualify (e.g. a constant map).
    pub theta: Option<f64>,
    /// Root-mean-square residual of the fit in log space.
    pub fit_residual: Option<f64>,
    /// Levels that entered the fit.
    pub fit_levels: Vec<i32>,
}

/// Localised energies `[u]^p_{B_l}` over the dyadic balls of `hierarchy`
/// and the exponent `θ` of the power law `[u]^p_{B_ρ} ≈ C ρ^θ`.
pub fn decay_profile(
    u: &VectorField,
    hierarchy: &BallHierarchy,
    params: &EnergyParams,
) -> Result<DecayTable> {
    let (lo, hi) = hierarchy.level_range();
    if ((hi - lo + 1) as usize) < MIN_DECAY_LEVELS {
        return Err(Error::Degenerate(format!(
            "decay profile needs at least {MIN_DECAY_LEVELS} levels, hierarchy spans {lo}..={hi}"
        )));
    }
    let mut rows = Vec::new();
    for level in lo..=hi {
        let sites = hierarchy.sites(level)?.len();
        let e = energy(u, params, &Region::Ball(hierarchy, level))?;
        if let Some(prev) = rows.last().map(|r: &DecayRow| r.energy) {
            if e < prev {
                return Err(Error::Degenerate(format!(
                    "localised energy decreased from {prev} to {e} at level {level}"
                )));
            }
        }
        rows.push(DecayRow {
            level,
            radius: hierarchy.radius(level),
            energy: e,
            sites,
        });
    }
    let fit: Vec<&DecayRow> = rows
        .iter()
        .filter(|r| r.energy > 0.0 && r.sites >= MIN_FIT_SITES)
        .collect();
    let fit_levels = fit.iter().map(|r| r.level).collect();
    let (theta, fit_residual) = if fit.len() < 2 {
        (None, None)
    } else {
        let xs: Vec<f64> = fit.iter().map(|r| r.radius.ln()).collect();
        let ys: Vec<f64> = fit.iter().map(|r| r.energy.ln()).collect();
        let (slope, intercept) = least_squares(&xs, &ys);
        let rss: f64 = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| (y - slope * x - intercept).powi(2))
            .sum();
        (Some(slope), Some((rss / xs.len() as f64).sqrt()))
    };
    Ok(DecayTable {
        rows,
        theta,
        fit_residual,
        fit_levels,
    })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
