//! Periodic sample grids, sampled fields and the dyadic ball hierarchy.
//!
//! Sites are addressed by a flat index in row-major order. All distances use
//! the torus metric: each coordinate difference is reduced to its minimum
//! image before the Euclidean norm is taken.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack applied to closed-ball membership so that sites lying
/// exactly on the sphere are included regardless of rounding in the radius.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Uniform periodic grid on `[0, L)^n` with `M` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    points_per_axis: usize,
    box_length: f64,
}

/// Validating constructor; `dim` must be 1 or 2 and `M` a power of two, at least 4.
pub fn make_grid(dim: usize, points_per_axis: usize, box_length: f64) -> Result<GridSpec> {
    GridSpec::new(dim, points_per_axis, box_length)
}

impl GridSpec {
    pub fn new(dim: usize, points_per_axis: usize, box_length: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!(
                "dimension {dim} unsupported (only 1 and 2)"
            )));
        }
        if points_per_axis < 4 || !points_per_axis.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points_per_axis {points_per_axis} must be a power of two >= 4"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "box_length {box_length} must be positive and finite"
            )));
        }
        if points_per_axis.checked_pow(dim as u32).is_none() {
            return Err(Error::InvalidGrid(format!(
                "{points_per_axis}^{dim} samples overflow the index space"
            )));
        }
        Ok(Self {
            dim,
            points_per_axis,
            box_length,
        })
    }

    /// Bypasses the power-of-two check; used for tiny hand-computed fixtures.
    #[cfg(test)]
    pub(crate) fn raw(dim: usize, points_per_axis: usize, box_length: f64) -> Self {
        Self {
            dim,
            points_per_axis,
            box_length,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn periodic(&self) -> bool {
        true
    }

    /// Grid spacing `h = L / M`.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.points_per_axis as f64
    }

    /// Volume of one cell, `h^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Number of sample sites, `M^n`.
    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coords(&self, site: usize) -> [usize; 2] {
        let m = self.points_per_axis;
        match self.dim {
            1 => [site, 0],
            _ => [site / m, site % m],
        }
    }

    pub fn site(&self, coords: [usize; 2]) -> usize {
        let m = self.points_per_axis;
        match self.dim {
            1 => coords[0] % m,
            _ => (coords[0] % m) * m + coords[1] % m,
        }
    }

    /// Physical coordinates of a site; unused axes are zero.
    pub fn position(&self, site: usize) -> [f64; 2] {
        let h = self.spacing();
        let c = self.coords(site);
        [c[0] as f64 * h, c[1] as f64 * h]
    }

    /// Site index of the periodic offset `y - x`.
    pub fn offset(&self, x: usize, y: usize) -> usize {
        let m = self.points_per_axis;
        let cx = self.coords(x);
        let cy = self.coords(y);
        self.site([(cy[0] + m - cx[0]) % m, (cy[1] + m - cx[1]) % m])
    }

    /// Site reached from `x` by the periodic offset `off`.
    pub fn translate(&self, x: usize, off: usize) -> usize {
        let cx = self.coords(x);
        let co = self.coords(off);
        self.site([cx[0] + co[0], cx[1] + co[1]])
    }

    /// Minimum-image length of an offset site.
    pub fn offset_length(&self, off: usize) -> f64 {
        let m = self.points_per_axis;
        let h = self.spacing();
        let c = self.coords(off);
        let mut acc = 0.0;
        for &k in &c[..self.dim] {
            let k = k.min(m - k) as f64 * h;
            acc += k * k;
        }
        acc.sqrt()
    }

    /// Torus distance between two sites.
    pub fn distance(&self, x: usize, y: usize) -> f64 {
        self.offset_length(self.offset(x, y))
    }

    /// Torus distance from a site to an arbitrary point of the box.
    pub fn distance_to_point(&self, site: usize, point: [f64; 2]) -> f64 {
        let l = self.box_length;
        let p = self.position(site);
        let mut acc = 0.0;
        for axis in 0..self.dim {
            let d = (p[axis] - point[axis]).rem_euclid(l);
            let d = d.min(l - d);
            acc += d * d;
        }
        acc.sqrt()
    }

    /// Signed integer wavenumbers of a DFT index, in `(-M/2, M/2]`.
    pub fn wavenumbers(&self, site: usize) -> [i64; 2] {
        let m = self.points_per_axis as i64;
        let c = self.coords(site);
        let fold = |k: usize| {
            let k = k as i64;
            if k > m / 2 {
                k - m
            } else {
                k
            }
        };
        let mut out = [0, 0];
        for axis in 0..self.dim {
            out[axis] = fold(c[axis]);
        }
        out
    }

    /// Euclidean norm `|ξ|` of the physical wave vector `2πk/L` at a DFT index.
    pub fn frequency_norm(&self, site: usize) -> f64 {
        let scale = 2.0 * std::f64::consts::PI / self.box_length;
        let k = self.wavenumbers(site);
        let (a, b) = (k[0] as f64 * scale, k[1] as f64 * scale);
        (a * a + b * b).sqrt()
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::ShapeMismatch(format!(
                "grid {self:?} differs from {other:?}"
            )));
        }
        Ok(())
    }
}

/// Real samples on every grid site.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    samples: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: GridSpec, samples: Vec<f64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} samples for a grid of {} sites",
                samples.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            samples: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: GridSpec, value: f64) -> Self {
        Self {
            grid,
            samples: vec![value; grid.len()],
        }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 2]) -> f64) -> Self {
        let samples = (0..grid.len()).map(|i| f(grid.position(i))).collect();
        Self { grid, samples }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// Grid average `M^{-n} Σ f`.
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute pointwise difference.
    pub fn max_abs_diff(&self, other: &ScalarField) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Grid inner product `h^n Σ f g`.
    pub fn inner(&self, other: &ScalarField) -> f64 {
        self.grid.cell_volume()
            * self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    /// Grid `L^q` norm `(h^n Σ |f|^q)^{1/q}`.
    pub fn lp_norm(&self, q: f64) -> f64 {
        let s: f64 = self.samples.iter().map(|v| v.abs().powf(q)).sum();
        (self.grid.cell_volume() * s).powf(1.0 / q)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// One-component vector field with the same samples.
    pub fn to_vector(&self) -> VectorField {
        VectorField {
            grid: self.grid,
            components: 1,
            samples: self.samples.clone(),
        }
    }
}

/// `R^N`-valued samples, stored sample-major: site `i` occupies
/// `samples[i*N .. (i+1)*N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: GridSpec,
    components: usize,
    samples: Vec<f64>,
}

impl VectorField {
    pub fn new(grid: GridSpec, components: usize, samples: Vec<f64>) -> Result<Self> {
        if components == 0 {
            return Err(Error::ShapeMismatch("zero components".into()));
        }
        let expected = grid
            .len()
            .checked_mul(components)
            .ok_or_else(|| Error::ShapeMismatch("sample count overflows".into()))?;
        if samples.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} samples, expected {} sites x {} components",
                samples.len(),
                grid.len(),
                components
            )));
        }
        Ok(Self {
            grid,
            components,
            samples,
        })
    }

    pub fn zeros(grid: GridSpec, components: usize) -> Self {
        Self {
            grid,
            components,
            samples: vec![0.0; grid.len() * components],
        }
    }

    pub fn constant(grid: GridSpec, value: &[f64]) -> Self {
        let samples = value
            .iter()
            .copied()
            .cycle()
            .take(grid.len() * value.len())
            .collect();
        Self {
            grid,
            components: value.len(),
            samples,
        }
    }

    /// Builds a field by evaluating `f(position, out)` at every site.
    pub fn from_fn(grid: GridSpec, components: usize, f: impl Fn([f64; 2], &mut [f64])) -> Self {
        let mut samples = vec![0.0; grid.len() * components];
        for (i, chunk) in samples.chunks_exact_mut(components).enumerate() {
            f(grid.position(i), chunk);
        }
        Self {
            grid,
            components,
            samples,
        }
    }

    pub fn from_components(parts: &[ScalarField]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::ShapeMismatch("no components".into()))?;
        let grid = *first.grid();
        for p in parts {
            grid.check_same(p.grid())?;
        }
        let n = parts.len();
        let mut samples = vec![0.0; grid.len() * n];
        for (j, p) in parts.iter().enumerate() {
            for (i, &v) in p.samples().iter().enumerate() {
                samples[i * n + j] = v;
            }
        }
        Ok(Self {
            grid,
            components: n,
            samples,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn sites(&self) -> usize {
        self.grid.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn at(&self, site: usize) -> &[f64] {
        let n = self.components;
        &self.samples[site * n..(site + 1) * n]
    }

    pub fn at_mut(&mut self, site: usize) -> &mut [f64] {
        let n = self.components;
        &mut self.samples[site * n..(site + 1) * n]
    }

    pub fn component(&self, j: usize) -> ScalarField {
        let samples = self
            .samples
            .chunks_exact(self.components)
            .map(|c| c[j])
            .collect();
        ScalarField {
            grid: self.grid,
            samples,
        }
    }

    /// Checks `| |u(x)| - 1 | <= tol` at every site.
    pub fn ensure_unit(&self, tol: f64) -> Result<()> {
        for (site, v) in self.samples.chunks_exact(self.components).enumerate() {
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > tol {
                return Err(Error::NotUnit { site, norm });
            }
        }
        Ok(())
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        self.ensure_unit(tol).is_ok()
    }

    /// Plain Euclidean inner product of the sample vectors (no cell weight).
    pub fn dot(&self, other: &VectorField) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn max_abs_diff(&self, other: &VectorField) -> f64 {
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &VectorField) -> VectorField {
        VectorField {
            grid: self.grid,
            components: self.components,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + scale * b)
                .collect(),
        }
    }

    pub fn scaled(&self, scale: f64) -> VectorField {
        VectorField {
            grid: self.grid,
            components: self.components,
            samples: self.samples.iter().map(|a| a * scale).collect(),
        }
    }

    /// Applies the row-major `N x N` matrix `q` to every sample.
    pub fn transform(&self, q: &[f64]) -> VectorField {
        let n = self.components;
        assert_eq!(q.len(), n * n, "matrix must be N x N");
        let mut out = vec![0.0; self.samples.len()];
        for (src, dst) in self.samples.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
            for i in 0..n {
                dst[i] = (0..n).map(|j| q[i * n + j] * src[j]).sum();
            }
        }
        VectorField {
            grid: self.grid,
            components: n,
            samples: out,
        }
    }

    /// Periodic shift of the samples by a site offset.
    pub fn shifted(&self, off: usize) -> VectorField {
        let mut out = VectorField::zeros(self.grid, self.components);
        for x in 0..self.sites() {
            let y = self.grid.translate(x, off);
            out.at_mut(y).copy_from_slice(self.at(x));
        }
        out
    }

    pub(crate) fn check_shape(&self, other: &VectorField) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        if self.components != other.components {
            return Err(Error::ShapeMismatch(format!(
                "{} vs {} components",
                self.components, other.components
            )));
        }
        Ok(())
    }
}

/// Quintic smoothstep `3`-jet profile on `[0, 1]`, clamped outside.
pub fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Sup of the derivative of [`smoothstep`]; the cutoff at level `l` has
/// gradient at most this constant over `2^l R`.
pub const CUTOFF_GRADIENT_BOUND: f64 = 15.0 / 8.0;

/// Dyadic balls `B_l = B_{2^l R}(x0)` around a grid site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallHierarchy {
    grid: GridSpec,
    center: usize,
    base_radius: f64,
    level_min: i32,
    level_max: i32,
}

impl BallHierarchy {
    pub fn new(
        grid: GridSpec,
        center: usize,
        base_radius: f64,
        level_min: i32,
        level_max: i32,
    ) -> Result<Self> {
        if center >= grid.len() {
            return Err(Error::InvalidGrid(format!(
                "center site {center} outside grid of {} sites",
                grid.len()
            )));
        }
        if !(base_radius.is_finite() && base_radius > 0.0) {
            return Err(Error::param("base_radius", base_radius, "must be positive"));
        }
        if level_min > level_max {
            return Err(Error::LevelOutOfRange {
                level: level_min,
                min: level_min,
                max: level_max,
            });
        }
        Ok(Self {
            grid,
            center,
            base_radius,
            level_min,
            level_max,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn base_radius(&self) -> f64 {
        self.base_radius
    }

    pub fn level_range(&self) -> (i32, i32) {
        (self.level_min, self.level_max)
    }

    pub fn radius(&self, level: i32) -> f64 {
        self.base_radius * 2f64.powi(level)
    }

    fn check_level(&self, level: i32) -> Result<()> {
        if level < self.level_min || level > self.level_max {
            return Err(Error::LevelOutOfRange {
                level,
                min: self.level_min,
                max: self.level_max,
            });
        }
        Ok(())
    }

    /// Level check plus the requirement that the sharp ball does not wrap
    /// around the torus.
    pub fn check_ball(&self, level: i32) -> Result<()> {
        self.check_level(level)?;
        let r = self.radius(level);
        if r > 0.5 * self.grid.box_length() {
            return Err(Error::BallOverflow {
                radius: r,
                box_length: self.grid.box_length(),
            });
        }
        Ok(())
    }

    /// Closed-ball membership for the sharp cutoff at `level`.
    pub fn contains(&self, level: i32, site: usize) -> bool {
        self.grid.distance(self.center, site) <= self.radius(level) * (1.0 + BOUNDARY_SLACK)
    }

    /// Sites of the closed ball `B_level`, in increasing index order.
    pub fn sites(&self, level: i32) -> Result<Vec<usize>> {
        self.check_ball(level)?;
        Ok((0..self.grid.len())
            .filter(|&s| self.contains(level, s))
            .collect())
    }

    /// Indicator of `B_level`.
    pub fn sharp_cutoff(&self, level: i32) -> Result<ScalarField> {
        self.check_ball(level)?;
        let samples = (0..self.grid.len())
            .map(|s| if self.contains(level, s) { 1.0 } else { 0.0 })
            .collect();
        ScalarField::new(self.grid, samples)
    }

    /// Mollified cutoff: one on `B_level`, zero outside `B_{level+1}`,
    /// gradient bounded by [`CUTOFF_GRADIENT_BOUND`]` / 2^level R`.
    pub fn cutoff_smooth(&self, level: i32) -> Result<ScalarField> {
        self.check_level(level)?;
        let outer = self.radius(level + 1);
        if outer >= 0.5 * self.grid.box_length() {
            return Err(Error::BallOverflow {
                radius: outer,
                box_length: self.grid.box_length(),
            });
        }
        Ok(self.smooth_profile(level))
    }

    fn smooth_profile(&self, level: i32) -> ScalarField {
        let r = self.radius(level);
        let samples = (0..self.grid.len())
            .map(|s| {
                let d = self.grid.distance(self.center, s);
                smoothstep((2.0 * r - d) / r)
            })
            .collect();
        ScalarField {
            grid: self.grid,
            samples,
        }
    }

    /// Annular cutoff `η̄_level - η̄_{level-1}`.
    pub fn ring_cutoff(&self, level: i32) -> Result<ScalarField> {
        // The inner profile may sit one level below the stored range.
        let outer = self.cutoff_smooth(level)?;
        let inner = self.smooth_profile(level - 1);
        Ok(outer.zip_with(&inner, |a, b| a - b))
    }

    /// Arithmetic mean of a vector field over the sharp ball `B_level`.
    pub fn ball_mean(&self, field: &VectorField, level: i32) -> Result<Vec<f64>> {
        self.grid.check_same(field.grid())?;
        let r = self.radius(level);
        if r < self.grid.spacing() {
            return Err(Error::EmptyBall {
                radius: r,
                spacing: self.grid.spacing(),
            });
        }
        let sites = self.sites(level)?;
        let n = field.components();
        let mut acc = vec![0.0; n];
        for &s in &sites {
            for (a, v) in acc.iter_mut().zip(field.at(s)) {
                *a += v;
            }
        }
        let count = sites.len() as f64;
        Ok(acc.into_iter().map(|a| a / count).collect())
    }

    /// Scalar convenience wrapper around [`BallHierarchy::ball_mean`].
    pub fn ball_mean_scalar(&self, field: &ScalarField, level: i32) -> Result<f64> {
        Ok(self.ball_mean(&field.to_vector(), level)?[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn make_grid_examples() {
        let g = make_grid(1, 64, 2.0 * PI).unwrap();
        assert_eq!(g.spacing(), 2.0 * PI / 64.0);
        let g = make_grid(2, 16, 1.0).unwrap();
        assert_eq!(g.len(), 256);
        assert!(matches!(make_grid(3, 16, 1.0), Err(Error::InvalidGrid(_))));
        assert!(make_grid(1, 48, 1.0).is_err());
        assert!(make_grid(1, 2, 1.0).is_err());
        assert!(make_grid(1, 8, 0.0).is_err());
    }

    #[test]
    fn torus_metric_is_symmetric_and_minimum_image() {
        let g = make_grid(2, 8, 8.0).unwrap();
        for x in 0..g.len() {
            for y in 0..g.len() {
                assert_eq!(g.distance(x, y), g.distance(y, x));
            }
        }
        assert_eq!(g.distance(g.site([0, 0]), g.site([7, 0])), 1.0);
        assert_eq!(g.distance(g.site([0, 0]), g.site([4, 4])), 32f64.sqrt());
    }

    #[test]
    fn cutoff_profile_values() {
        let g = make_grid(1, 256, 2.0 * PI).unwrap();
        let hier = BallHierarchy::new(g, 0, 0.2, 0, 2).unwrap();
        for level in 0..=2 {
            let eta = hier.cutoff_smooth(level).unwrap();
            assert_eq!(eta.samples()[0], 1.0);
            let r = hier.radius(level);
            for s in 0..g.len() {
                let d = g.distance(0, s);
                if d <= r {
                    assert_eq!(eta.samples()[s], 1.0);
                }
                if d >= 2.0 * r + g.spacing() {
                    assert_eq!(eta.samples()[s], 0.0);
                }
            }
        }
    }

    #[test]
    fn cutoff_gradient_bound_is_level_independent() {
        let g = make_grid(1, 256, 2.0 * PI).unwrap();
        let hier = BallHierarchy::new(g, 0, 0.1, 0, 3).unwrap();
        let h = g.spacing();
        for level in 0..=3 {
            let eta = hier.cutoff_smooth(level).unwrap();
            let s = eta.samples();
            let max_grad = (0..s.len())
                .map(|i| (s[(i + 1) % s.len()] - s[i]).abs() / h)
                .fold(0.0, f64::max);
            let scaled = max_grad * hier.radius(level);
            assert!(scaled <= CUTOFF_GRADIENT_BOUND, "level {level}: {scaled}");
            assert!(scaled > 1.0);
        }
    }

    #[test]
    fn cutoff_errors() {
        let g = make_grid(1, 64, 2.0 * PI).unwrap();
        let hier = BallHierarchy::new(g, 0, 1.0, 0, 3).unwrap();
        assert!(matches!(
            hier.cutoff_smooth(5),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(matches!(
            hier.cutoff_smooth(1),
            Err(Error::BallOverflow { .. })
        ));
    }

    #[test]
    fn sharp_cutoffs_nest_and_rings_telescope() {
        let g = make_grid(2, 32, 2.0 * PI).unwrap();
        let hier = BallHierarchy::new(g, g.site([16, 16]), 0.2, 0, 2).unwrap();
        let c0 = hier.sharp_cutoff(0).unwrap();
        let c1 = hier.sharp_cutoff(1).unwrap();
        assert!(c0.samples().iter().zip(c1.samples()).all(|(a, b)| a <= b));
        let mut total = ScalarField::zeros(g);
        for l in 0..=2 {
            let ring = hier.ring_cutoff(l).unwrap();
            assert!(ring.samples().iter().all(|&v| v >= 0.0));
            total = total.zip_with(&ring, |a, b| a + b);
        }
        let top = hier.cutoff_smooth(2).unwrap();
        let bottom = hier.smooth_profile(-1);
        let expected = top.zip_with(&bottom, |a, b| a - b);
        assert!(total.max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn ball_mean_examples() {
        let g = make_grid(1, 128, 2.0 * PI).unwrap();
        let hier = BallHierarchy::new(g, 0, PI / 4.0, -2, 0).unwrap();
        let c = VectorField::constant(g, &[2.5, -1.0]);
        assert_eq!(hier.ball_mean(&c, 0).unwrap(), vec![2.5, -1.0]);

        // Odd profile around the centre: x on (-L/2, L/2].
        let odd = ScalarField::from_fn(g, |p| {
            if p[0] > PI {
                p[0] - 2.0 * PI
            } else {
                p[0]
            }
        });
        assert!(hier.ball_mean_scalar(&odd, 0).unwrap().abs() < 1e-12);

        // cos over B_{π/4}(0) against an explicit loop.
        let f = ScalarField::from_fn(g, |p| p[0].cos());
        let h = g.spacing();
        let mut sum = 0.0;
        let mut count = 0;
        for i in 0..128 {
            let x = i as f64 * h;
            let d = x.min(2.0 * PI - x);
            if d <= PI / 4.0 + 1e-12 {
                sum += x.cos();
                count += 1;
            }
        }
        assert_eq!(count, 33);
        let got = hier.ball_mean_scalar(&f, 0).unwrap();
        assert!((got - sum / count as f64).abs() < 1e-14);

        let tiny = BallHierarchy::new(g, 0, h / 4.0, 0, 0).unwrap();
        assert!(matches!(
            tiny.ball_mean(&c, 0),
            Err(Error::EmptyBall { .. })
        ));
    }

    #[test]
    fn ball_mean_ignores_sample_order() {
        let g = make_grid(1, 64, 2.0 * PI).unwrap();
        let f = ScalarField::from_fn(g, |p| (3.0 * p[0]).sin() + p[0]);
        let hier = BallHierarchy::new(g, 5, 0.6, 0, 0).unwrap();
        let sites = hier.sites(0).unwrap();
        let forward: f64 = sites.iter().map(|&s| f.samples()[s]).sum::<f64>();
        let backward: f64 = sites.iter().rev().map(|&s| f.samples()[s]).sum::<f64>();
        let mean = hier.ball_mean_scalar(&f, 0).unwrap();
        let n = sites.len() as f64;
        assert!((mean - forward / n).abs() < 1e-14);
        assert!((mean - backward / n).abs() < 1e-14);
    }

    #[test]
    fn vector_field_shape_checks() {
        let g = make_grid(1, 8, 1.0).unwrap();
        assert!(VectorField::new(g, 2, vec![0.0; 15]).is_err());
        assert!(ScalarField::new(g, vec![0.0; 9]).is_err());
        let v = VectorField::from_fn(g, 2, |p, out| {
            out[0] = p[0].cos();
            out[1] = p[0].sin();
        });
        assert!(v.is_unit(1e-12));
        let back = VectorField::from_components(&[v.component(0), v.component(1)]).unwrap();
        assert_eq!(back, v);
    }
}
