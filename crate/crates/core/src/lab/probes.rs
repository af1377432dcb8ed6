//! Ratio probes for the functional inequalities: each sample yields
//! `lhs / rhs`, and a probe passes when no ratio exceeds its constant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::energy::{seminorm, EnergyParams, Region};
use crate::error::{Error, Result};
use crate::frac::{commutator_h, spectral_power};
use crate::grid::{GridSpec, ScalarField};

/// Largest grid accepted by the `O(M^3)` triple-sum probe.
pub const T1_MAX_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub id: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub probe: String,
    pub seed: u64,
    pub sample_count: usize,
    /// Samples with `lhs = rhs = 0` are excluded from the ratio.
    pub excluded: usize,
    pub worst_ratio: f64,
    /// `None` while calibrating.
    pub frozen_c: Option<f64>,
    pub violations: usize,
    pub pass: bool,
    pub samples: Vec<ProbeSample>,
}

impl ProbeReport {
    /// A sample violates the bound when `lhs > C rhs`; with `rhs = 0` any
    /// positive `lhs` is a violation.
    pub fn from_samples(
        probe: &str,
        seed: u64,
        samples: Vec<ProbeSample>,
        frozen_c: Option<f64>,
    ) -> Self {
        let excluded = samples.iter().filter(|s| s.lhs == 0.0 && s.rhs == 0.0).count();
        let worst_ratio = samples
            .iter()
            .filter(|s| !(s.lhs == 0.0 && s.rhs == 0.0))
            .fold(0.0f64, |m, s| m.max(s.ratio));
        let violations = match frozen_c {
            Some(c) => samples.iter().filter(|s| s.lhs > c * s.rhs).count(),
            None => 0,
        };
        Self {
            probe: probe.to_string(),
            seed,
            sample_count: samples.len(),
            excluded,
            worst_ratio,
            frozen_c,
            violations,
            pass: violations == 0,
            samples,
        }
    }
}

pub fn sample(id: u64, lhs: f64, rhs: f64) -> ProbeSample {
    let ratio = if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    };
    ProbeSample { id, lhs, rhs, ratio }
}

/// Real trigonometric polynomial with wavenumbers `1 ≤ |k|_∞ ≤ kmax`,
/// coefficients uniform in `[-1, 1]` damped by `1/|k|`, and zero mean.
pub fn band_limited_field(grid: GridSpec, kmax: usize, seed: u64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = 2.0 * std::f64::consts::PI / grid.box_length();
    let k = kmax as i64;
    let mut modes = Vec::new();
    let k1_range = if grid.dim() == 2 { -k..=k } else { 0..=0 };
    for k0 in 0..=k {
        for k1 in k1_range.clone() {
            // One representative of each ±k pair.
            if (k0 == 0 && k1 <= 0) || (k0 == 0 && k1 == 0) {
                continue;
            }
            let norm = ((k0 * k0 + k1 * k1) as f64).sqrt();
            let a = rng.gen_range(-1.0..1.0) / norm;
            let b = rng.gen_range(-1.0..1.0) / norm;
            modes.push((k0 as f64, k1 as f64, a, b));
        }
    }
    let f = ScalarField::from_fn(grid, |p| {
        modes
            .iter()
            .map(|&(k0, k1, a, b)| {
                let ph = w * (k0 * p[0] + k1 * p[1]);
                a * ph.cos() + b * ph.sin()
            })
            .sum()
    });
    let mean = f.mean();
    f.map(|v| v - mean)
}

/// `p* = np / (n - (s - t) p)`.
pub fn sobolev_exponent(n: usize, s: f64, t: f64, p: f64) -> Result<f64> {
    if !(0.0 <= t && t < s && s < 1.0) {
        return Err(Error::param("t", t, format!("needs 0 <= t < s = {s} < 1")));
    }
    let nf = n as f64;
    let upper = nf / (s - t);
    if !(p > 1.0 && p < upper) {
        return Err(Error::param("p", p, format!("needs 1 < p < n/(s-t) = {upper}")));
    }
    Ok(nf * p / (nf - (s - t) * p))
}

/// `‖Λ^t f‖_{p*}` against `[f]_{s,p}` on the whole torus.
pub fn sobolev_probe(
    fields: &[(u64, ScalarField)],
    s: f64,
    t: f64,
    p: f64,
    frozen_c: Option<f64>,
    seed: u64,
) -> Result<ProbeReport> {
    let mut samples = Vec::with_capacity(fields.len());
    for (id, f) in fields {
        let n = f.grid().dim();
        let q = sobolev_exponent(n, s, t, p)?;
        let params = EnergyParams::new(n, s, Some(p), 0.0, false)?;
        let lhs = spectral_power(f, t).lp_norm(q);
        let rhs = seminorm(&f.to_vector(), &params, &Region::Torus)?;
        samples.push(sample(*id, lhs, rhs));
    }
    Ok(ProbeReport::from_samples("sobolev", seed, samples, frozen_c))
}

/// Worst Sobolev ratio at `t = s - near` and `t = s - far`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SobolevDegeneracy {
    pub t_near: f64,
    pub t_far: f64,
    pub ratio_near: f64,
    pub ratio_far: f64,
    pub grew: bool,
}

pub fn sobolev_degeneracy(
    fields: &[(u64, ScalarField)],
    s: f64,
    p: f64,
    near: f64,
    far: f64,
) -> Result<SobolevDegeneracy> {
    let (t_near, t_far) = (s - near, s - far);
    let ratio_near = sobolev_probe(fields, s, t_near, p, None, 0)?.worst_ratio;
    let ratio_far = sobolev_probe(fields, s, t_far, p, None, 0)?.worst_ratio;
    Ok(SobolevDegeneracy {
        t_near,
        t_far,
        ratio_near,
        ratio_far,
        grew: ratio_near > ratio_far,
    })
}

/// Checks `1/p = 1/p1 + 1/p2 - (α - ε)/n` and the ranges of all exponents.
pub fn check_commutator_exponents(
    n: usize,
    alpha: f64,
    eps: f64,
    p: f64,
    p1: f64,
    p2: f64,
) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", alpha, "needs alpha in (0, 1)"));
    }
    if !(eps >= 0.0 && eps < alpha) {
        return Err(Error::param("eps", eps, format!("needs 0 <= eps < alpha = {alpha}")));
    }
    for (name, v) in [("p", p), ("p1", p1), ("p2", p2)] {
        if !(v > 1.0 && v.is_finite()) {
            return Err(Error::param(name, v, "needs 1 < exponent < inf"));
        }
    }
    let rel = 1.0 / p1 + 1.0 / p2 - (alpha - eps) / n as f64;
    if (1.0 / p - rel).abs() > 1e-12 {
        return Err(Error::param(
            "p",
            p,
            format!("exponent relation requires 1/p = {rel}"),
        ));
    }
    Ok(())
}

/// `‖Λ^ε H_α(a, b)‖_p` against `‖Λ^α a‖_{p1} ‖Λ^α b‖_{p2}`.
#[allow(clippy::too_many_arguments)]
pub fn commutator_probe(
    pairs: &[(u64, ScalarField, ScalarField)],
    alpha: f64,
    eps: f64,
    p: f64,
    p1: f64,
    p2: f64,
    frozen_c: Option<f64>,
    seed: u64,
) -> Result<ProbeReport> {
    let mut samples = Vec::with_capacity(pairs.len());
    for (id, a, b) in pairs {
        check_commutator_exponents(a.grid().dim(), alpha, eps, p, p1, p2)?;
        let h = commutator_h(a, b, alpha)?;
        let lhs = spectral_power(&h, eps).lp_norm(p);
        let rhs = spectral_power(a, alpha).lp_norm(p1) * spectral_power(b, alpha).lp_norm(p2);
        samples.push(sample(*id, lhs, rhs));
    }
    Ok(ProbeReport::from_samples("commutator", seed, samples, frozen_c))
}

/// Direct triple sum
/// `T₁(z) = Σ_{x≠y} h^2 |x-y|^{-1-s p_s} |f(x)-f(y)|^{p_s-1} Γ(x, y, z)` with
/// `Γ = |g(x)+g(y)-2g(z)| · ||x-z|^{t-1} - |y-z|^{t-1}|` (`n = 1`, `p_s = 1/s`,
/// coincident kernel values dropped).
pub fn t1_field(f: &ScalarField, g: &ScalarField, s: f64, t: f64) -> Result<ScalarField> {
    let grid = *f.grid();
    grid.check_same(g.grid())?;
    if grid.dim() != 1 || grid.points_per_axis() > T1_MAX_POINTS {
        return Err(Error::InvalidGrid(format!(
            "the triple-sum probe needs n = 1 and M <= {T1_MAX_POINTS}"
        )));
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::param("s", s, "needs s in (0, 1)"));
    }
    if !(t > 0.0 && t < s) {
        return Err(Error::param("t", t, format!("needs 0 < t < s = {s}")));
    }
    let m = grid.len();
    let ps = 1.0 / s;
    let h = grid.spacing();
    let riesz: Vec<f64> = (0..m)
        .map(|o| if o == 0 { 0.0 } else { grid.offset_length(o).powf(t - 1.0) })
        .collect();
    let fs = f.samples();
    let gs = g.samples();
    let samples = (0..m)
        .map(|z| {
            let mut acc = 0.0;
            for x in 0..m {
                let kx = riesz[grid.offset(z, x)];
                for y in 0..m {
                    if y == x {
                        continue;
                    }
                    let w = h * h / grid.distance(x, y).powf(1.0 + s * ps);
                    let gamma = (gs[x] + gs[y] - 2.0 * gs[z]).abs()
                        * (kx - riesz[grid.offset(z, y)]).abs();
                    acc += w * (fs[x] - fs[y]).abs().powf(ps - 1.0) * gamma;
                }
            }
            acc
        })
        .collect();
    ScalarField::new(grid, samples)
}

/// `‖T₁‖_{1/(1-t)}` against `[f]_{s,p_s}^{p_s-1} [g]_{s,p_s}`.
pub fn t1_bound_probe(
    pairs: &[(u64, ScalarField, ScalarField)],
    s: f64,
    t: f64,
    frozen_c: Option<f64>,
    seed: u64,
) -> Result<ProbeReport> {
    let mut samples = Vec::with_capacity(pairs.len());
    for (id, f, g) in pairs {
        let t1 = t1_field(f, g, s, t)?;
        let ps = 1.0 / s;
        let params = EnergyParams::new(1, s, Some(ps), 0.0, true)?;
        let lhs = t1.lp_norm(1.0 / (1.0 - t));
        let rhs = seminorm(&f.to_vector(), &params, &Region::Torus)?.powf(ps - 1.0)
            * seminorm(&g.to_vector(), &params, &Region::Torus)?;
        samples.push(sample(*id, lhs, rhs));
    }
    Ok(ProbeReport::from_samples("t1", seed, samples, frozen_c))
}
