use serde::{Deserialize, Serialize};

use super::functional::UNIT_TOL;
use super::{degenerate_factor, dist2, ordered_sum, EnergyParams, KernelMode, PairKernelCache, Region};
use crate::error::{Error, Result};
use crate::grid::{ScalarField, VectorField};

/// Antisymmetric `N x N` matrix with entries in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    /// Row-major entries.
    pub fn new(n: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidOmega(format!(
                "{} entries for a {n} x {n} matrix",
                entries.len()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let a = entries[i * n + j];
                if !(-1..=1).contains(&a) {
                    return Err(Error::InvalidOmega(format!("entry ({i}, {j}) = {a}")));
                }
                if a != -entries[j * n + i] {
                    return Err(Error::InvalidOmega(format!(
                        "entries ({i}, {j}) and ({j}, {i}) are not antisymmetric"
                    )));
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; n * n],
        }
    }

    /// `e_i e_j^T - e_j e_i^T`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        assert!(i != j && i < n && j < n);
        let mut entries = vec![0; n * n];
        entries[i * n + j] = 1;
        entries[j * n + i] = -1;
        Self { n, entries }
    }

    /// All `N(N-1)/2` elementary matrices with `i < j`.
    pub fn elementary_family(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                out.push(Self::elementary(n, i, j));
            }
        }
        out
    }

    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    fn nonzero(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let a = self.get(i, j);
                if a != 0 {
                    out.push((i, j, a as f64));
                }
            }
        }
        out
    }
}

/// `Σ_{x ≠ y} w_xy |Δ|^{p-2} ω_ij Δ^i (u^j(x) φ(x) - u^j(y) φ(y))` with
/// `Δ = u(x) - u(y)`, summed over the region. Zero at critical points when
/// the region is the whole torus.
pub fn el_residual(
    u: &VectorField,
    phi: &ScalarField,
    omega: &SignMatrix,
    params: &EnergyParams,
    region: &Region,
) -> Result<f64> {
    params.check_grid(u.grid())?;
    u.grid().check_same(phi.grid())?;
    if omega.size() != u.components() {
        return Err(Error::InvalidOmega(format!(
            "{0} x {0} matrix for a field with {1} components",
            omega.size(),
            u.components()
        )));
    }
    let sites = region.sites(u.grid())?;
    for &x in &sites {
        let norm = u.at(x).iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { site: x, norm });
        }
    }
    let terms = omega.nonzero();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let kernel = PairKernelCache::new(*u.grid(), params.kernel_exponent(), KernelMode::Auto);
    let p = params.p();
    let ph = phi.samples();
    Ok(ordered_sum(&sites, |x| {
        let ux = u.at(x);
        let mut acc = 0.0;
        for &y in &sites {
            if y == x {
                continue;
            }
            let uy = u.at(y);
            let mut inner = 0.0;
            for &(i, j, a) in &terms {
                inner += a * (ux[i] - uy[i]) * (ux[j] * ph[x] - uy[j] * ph[y]);
            }
            acc += kernel.weight(x, y) * degenerate_factor(dist2(ux, uy), p) * inner;
        }
        acc
    }))
}
