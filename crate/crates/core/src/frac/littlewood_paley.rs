use serde::{Deserialize, Serialize};

use super::spectrum::Spectrum;
use crate::energy::{seminorm, EnergyParams, Region};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField};

/// `C^∞` radial profile: one on `[0, 1]`, zero on `[2, ∞)`.
pub fn lp_profile(r: f64) -> f64 {
    fn g(x: f64) -> f64 {
        if x > 0.0 {
            (-1.0 / x).exp()
        } else {
            0.0
        }
    }
    if r <= 1.0 {
        return 1.0;
    }
    if r >= 2.0 {
        return 0.0;
    }
    let a = g(2.0 - r);
    a / (a + g(r - 1.0))
}

/// Dyadic frequency bank `p̂_j(ξ) = ψ(|ξ|/2^j) - ψ(|ξ|/2^{j-1})` for
/// `j_min < j <= j_max`; the lowest band is `ψ(|ξ|/2^{j_min})` and absorbs all
/// low frequencies. The zero mode belongs to no band.
#[derive(Debug, Clone)]
pub struct LPBank {
    grid: GridSpec,
    level_min: i32,
    level_max: i32,
    multipliers: Vec<Vec<f64>>,
}

impl LPBank {
    /// Fails unless `2^{j_max}` reaches the largest grid frequency, which is
    /// what makes the bands a partition of unity.
    pub fn new(grid: GridSpec, level_min: i32, level_max: i32) -> Result<Self> {
        if level_min > level_max {
            return Err(Error::LevelOutOfRange {
                level: level_min,
                min: level_min,
                max: level_max,
            });
        }
        let top = (0..grid.len())
            .map(|k| grid.frequency_norm(k))
            .fold(0.0, f64::max);
        if 2f64.powi(level_max) < top {
            return Err(Error::param(
                "level_max",
                level_max as f64,
                format!("2^level_max must reach the top grid frequency {top}"),
            ));
        }
        let multipliers = (level_min..=level_max)
            .map(|j| {
                (0..grid.len())
                    .map(|k| {
                        let xi = grid.frequency_norm(k);
                        if xi == 0.0 {
                            0.0
                        } else if j == level_min {
                            lp_profile(xi / 2f64.powi(j))
                        } else {
                            lp_profile(xi / 2f64.powi(j)) - lp_profile(xi / 2f64.powi(j - 1))
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self {
            grid,
            level_min,
            level_max,
            multipliers,
        })
    }

    /// Bank from `level_min` up to the smallest level covering the grid.
    pub fn for_grid(grid: GridSpec, level_min: i32) -> Result<Self> {
        let top = (0..grid.len())
            .map(|k| grid.frequency_norm(k))
            .fold(0.0, f64::max);
        let level_max = (top.log2().ceil() as i32).max(level_min);
        Self::new(grid, level_min, level_max)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn level_range(&self) -> (i32, i32) {
        (self.level_min, self.level_max)
    }

    pub fn levels(&self) -> impl Iterator<Item = i32> {
        self.level_min..=self.level_max
    }

    pub fn multiplier(&self, level: i32) -> Result<&[f64]> {
        if level < self.level_min || level > self.level_max {
            return Err(Error::LevelOutOfRange {
                level,
                min: self.level_min,
                max: self.level_max,
            });
        }
        Ok(&self.multipliers[(level - self.level_min) as usize])
    }

    /// `P_j` applied to a spectrum in place.
    pub fn project_spectrum(&self, spectrum: &mut Spectrum, level: i32) -> Result<()> {
        self.grid.check_same(spectrum.grid())?;
        spectrum.apply_table(self.multiplier(level)?);
        Ok(())
    }
}

/// Band-limited projection `P_j f`.
pub fn lp_project(f: &ScalarField, bank: &LPBank, level: i32) -> Result<ScalarField> {
    bank.grid.check_same(f.grid())?;
    let mut spec = Spectrum::of(f);
    bank.project_spectrum(&mut spec, level)?;
    Ok(spec.to_field())
}

/// `P_{j_m} ⋯ P_{j_1} f`, composed on the spectrum. Bands with disjoint
/// support therefore give an exactly zero field.
pub fn lp_project_chain(f: &ScalarField, bank: &LPBank, levels: &[i32]) -> Result<ScalarField> {
    bank.grid.check_same(f.grid())?;
    let mut spec = Spectrum::of(f);
    for &level in levels {
        bank.project_spectrum(&mut spec, level)?;
    }
    Ok(spec.to_field())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpSupRow {
    pub level: i32,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Per level `j`: `sup_x |Λ^t P_j f|` against `2^{j(n/p + t - s)} [f]_{s,p}`.
pub fn lp_sup_bound_probe(
    f: &ScalarField,
    bank: &LPBank,
    s: f64,
    t: f64,
    p: f64,
) -> Result<Vec<LpSupRow>> {
    if !(0.0..1.0).contains(&t) || !(t < s && s < 1.0) {
        return Err(Error::param("t", t, format!("needs 0 <= t < s = {s} < 1")));
    }
    if p <= 1.0 {
        return Err(Error::param("p", p, "needs p > 1"));
    }
    bank.grid.check_same(f.grid())?;
    let grid = *f.grid();
    let n = grid.dim() as f64;
    let params = EnergyParams::new(grid.dim(), s, Some(p), 0.0, false)?;
    let semi = seminorm(&f.to_vector(), &params, &Region::Torus)?;
    let base = Spectrum::of(f);
    bank.levels()
        .map(|j| {
            let mut spec = base.clone();
            bank.project_spectrum(&mut spec, j)?;
            if t > 0.0 {
                spec.apply(|k| grid.frequency_norm(k).powf(t));
            }
            let lhs = spec.to_field().max_abs();
            let rhs = 2f64.powf(j as f64 * (n / p + t - s)) * semi;
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
            Ok(LpSupRow {
                level: j,
                lhs,
                rhs,
                ratio,
            })
        })
        .collect()
}
