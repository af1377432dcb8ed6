use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::VectorField;

/// Stability factor between the finest and the coarsest distance band.
pub const HOLDER_STABILITY_FACTOR: f64 = 2.0;
/// Above this many pairs, base points are subsampled with a fixed stride.
const MAX_PAIRS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderRow {
    pub beta: f64,
    /// `sup |u(x) - u(y)| / dist^β` over pairs with `dist ∈ [2^b h, 2^{b+1} h)`.
    pub band_sups: Vec<f64>,
    pub sup: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HolderFit {
    /// Largest stable exponent of the grid, if any.
    pub best_beta: Option<f64>,
    /// Lower edges `2^b h` of the distance bands.
    pub band_edges: Vec<f64>,
    pub rows: Vec<HolderRow>,
}

/// Hölder quotients over dyadic distance bands. An exponent is stable when
/// no band exceeds [`HOLDER_STABILITY_FACTOR`] times the coarsest band.
pub fn holder_fit(u: &VectorField, beta_grid: &[f64]) -> Result<HolderFit> {
    if beta_grid.is_empty() {
        return Err(Error::Degenerate("empty exponent grid".into()));
    }
    for &b in beta_grid {
        if !(b > 0.0 && b <= 1.0) {
            return Err(Error::param("beta", b, "needs beta in (0, 1]"));
        }
    }
    let grid = *u.grid();
    let h = grid.spacing();
    let max_len = (0..grid.len()).map(|o| grid.offset_length(o)).fold(0.0, f64::max);
    let bands = (max_len / h).log2().floor() as usize + 1;
    if bands < 2 {
        return Err(Error::Degenerate(format!(
            "grid with {} points per axis has a single distance band",
            grid.points_per_axis()
        )));
    }
    let band_of: Vec<Option<usize>> = (0..grid.len())
        .map(|o| {
            if o == 0 {
                None
            } else {
                let b = (grid.offset_length(o) / h * (1.0 + 1e-12)).log2().floor();
                Some((b as usize).min(bands - 1))
            }
        })
        .collect();
    let stride = (grid.len() * grid.len()).div_ceil(MAX_PAIRS).max(1);
    let mut sups = vec![vec![0.0f64; bands]; beta_grid.len()];
    let n = u.components();
    for x in (0..grid.len()).step_by(stride) {
        let ux = u.at(x);
        for off in 1..grid.len() {
            let y = grid.translate(x, off);
            let uy = u.at(y);
            let diff = (0..n).map(|k| (ux[k] - uy[k]).powi(2)).sum::<f64>().sqrt();
            if diff == 0.0 {
                continue;
            }
            let d = grid.offset_length(off);
            let b = band_of[off].expect("non-zero offset");
            for (row, &beta) in sups.iter_mut().zip(beta_grid) {
                let q = diff / d.powf(beta);
                if q > row[b] {
                    row[b] = q;
                }
            }
        }
    }
    let rows: Vec<HolderRow> = beta_grid
        .iter()
        .zip(sups)
        .map(|(&beta, band_sups)| {
            let sup = band_sups.iter().copied().fold(0.0, f64::max);
            let coarse = band_sups[bands - 1];
            HolderRow {
                beta,
                stable: sup <= HOLDER_STABILITY_FACTOR * coarse,
                sup,
                band_sups,
            }
        })
        .collect();
    let best_beta = rows
        .iter()
        .filter(|r| r.stable)
        .map(|r| r.beta)
        .fold(None, |m: Option<f64>, b| Some(m.map_or(b, |m| m.max(b))));
    Ok(HolderFit {
        best_beta,
        band_edges: (0..bands).map(|b| h * 2f64.powi(b as i32)).collect(),
        rows,
    })
}
