use crate::grid::GridSpec;

/// Pair count above which weights are recomputed per pair instead of read
/// from the per-offset table.
pub const STREAMING_THRESHOLD: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelMode {
    #[default]
    Auto,
    Cached,
    Streamed,
}

/// Pair weights `w_xy = h^{2n} / |x - y|^{n+sp}`.
///
/// The weight depends only on the periodic offset `y - x`, so the cache holds
/// one value per offset. Streamed and cached lookups evaluate the same
/// expression and agree bit for bit.
#[derive(Debug, Clone)]
pub struct PairKernelCache {
    grid: GridSpec,
    exponent: f64,
    table: Option<Vec<f64>>,
}

impl PairKernelCache {
    pub fn new(grid: GridSpec, exponent: f64, mode: KernelMode) -> Self {
        let pairs = grid.len().saturating_mul(grid.len());
        let cached = match mode {
            KernelMode::Cached => true,
            KernelMode::Streamed => false,
            KernelMode::Auto => pairs < STREAMING_THRESHOLD,
        };
        let mut kernel = Self {
            grid,
            exponent,
            table: None,
        };
        if cached {
            kernel.table = Some((0..grid.len()).map(|off| kernel.offset_weight(off)).collect());
        }
        kernel
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn is_cached(&self) -> bool {
        self.table.is_some()
    }

    fn offset_weight(&self, off: usize) -> f64 {
        if off == 0 {
            return 0.0;
        }
        let h2n = self.grid.cell_volume() * self.grid.cell_volume();
        h2n / self.grid.offset_length(off).powf(self.exponent)
    }

    /// Weight of the pair `(x, y)`; zero on the diagonal.
    #[inline]
    pub fn weight(&self, x: usize, y: usize) -> f64 {
        let off = self.grid.offset(x, y);
        match &self.table {
            Some(t) => t[off],
            None => self.offset_weight(off),
        }
    }
}
