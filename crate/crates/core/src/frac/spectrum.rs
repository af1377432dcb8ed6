use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::{GridSpec, ScalarField};

/// DFT coefficients of a real field, indexed like the grid sites.
///
/// Multipliers are applied in place; composing several multipliers before a
/// single inverse transform keeps exact zeros exact.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn of(field: &ScalarField) -> Self {
        let grid = *field.grid();
        let mut coeffs: Vec<Complex64> = field
            .samples()
            .iter()
            .map(|&v| Complex64::new(v, 0.0))
            .collect();
        transform(&grid, &mut coeffs, false);
        Self { grid, coeffs }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Multiplies each coefficient by `multiplier(dft_index)`.
    pub fn apply(&mut self, multiplier: impl Fn(usize) -> f64) {
        for (k, c) in self.coeffs.iter_mut().enumerate() {
            *c *= multiplier(k);
        }
    }

    /// Multiplies by a precomputed multiplier table.
    pub fn apply_table(&mut self, table: &[f64]) {
        debug_assert_eq!(table.len(), self.coeffs.len());
        for (c, &m) in self.coeffs.iter_mut().zip(table) {
            *c *= m;
        }
    }

    /// Inverse transform, keeping the real part.
    pub fn to_field(&self) -> ScalarField {
        let mut buf = self.coeffs.clone();
        transform(&self.grid, &mut buf, true);
        let scale = 1.0 / self.grid.len() as f64;
        let samples = buf.into_iter().map(|c| c.re * scale).collect();
        ScalarField::new(self.grid, samples).expect("spectrum length matches grid")
    }
}

/// Unnormalised forward or inverse DFT over all grid axes.
fn transform(grid: &GridSpec, data: &mut [Complex64], inverse: bool) {
    let m = grid.points_per_axis();
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(m)
    } else {
        planner.plan_fft_forward(m)
    };
    match grid.dim() {
        1 => fft.process(data),
        _ => {
            // Rows are contiguous; columns go through a scratch buffer.
            fft.process(data);
            let mut column = vec![Complex64::new(0.0, 0.0); m];
            for j in 0..m {
                for i in 0..m {
                    column[i] = data[i * m + j];
                }
                fft.process(&mut column);
                for i in 0..m {
                    data[i * m + j] = column[i];
                }
            }
        }
    }
}

/// Applies a real radial multiplier `m(|ξ|)` to a field.
pub fn apply_multiplier(field: &ScalarField, multiplier: impl Fn(f64) -> f64) -> ScalarField {
    let grid = *field.grid();
    let mut spec = Spectrum::of(field);
    spec.apply(|k| multiplier(grid.frequency_norm(k)));
    spec.to_field()
}
