use rayon::prelude::*;

use super::{
    degenerate_factor, dist2, ordered_sum, power_from_sq, EnergyParams, KernelMode,
    PairKernelCache, Region,
};
use crate::error::{Error, Result};
use crate::grid::VectorField;

/// Unit-norm tolerance for fields entering constrained operations.
pub const UNIT_TOL: f64 = 1e-12;

fn kernel_for(u: &VectorField, params: &EnergyParams) -> Result<PairKernelCache> {
    params.check_grid(u.grid())?;
    Ok(PairKernelCache::new(
        *u.grid(),
        params.kernel_exponent(),
        KernelMode::Auto,
    ))
}

/// `E = Σ_{x ≠ y ∈ region} w_xy |u(x) - u(y)|^p`.
pub fn energy(u: &VectorField, params: &EnergyParams, region: &Region) -> Result<f64> {
    let kernel = kernel_for(u, params)?;
    let sites = region.sites(u.grid())?;
    let p = params.p();
    Ok(ordered_sum(&sites, |x| {
        let ux = u.at(x);
        let mut acc = 0.0;
        for &y in &sites {
            if y != x {
                acc += kernel.weight(x, y) * power_from_sq(dist2(ux, u.at(y)), p);
            }
        }
        acc
    }))
}

/// `[u]_{s,p,region} = E^{1/p}`.
pub fn seminorm(u: &VectorField, params: &EnergyParams, region: &Region) -> Result<f64> {
    Ok(energy(u, params, region)?.powf(1.0 / params.p()))
}

/// Full-torus energy with `|d|^p` replaced by `(|d|^2 + ε)^{p/2} - ε^{p/2}`;
/// equals [`energy`] when `ε = 0`.
pub fn energy_regularized(u: &VectorField, params: &EnergyParams) -> Result<f64> {
    let eps = params.eps_reg();
    if eps == 0.0 {
        return energy(u, params, &Region::Torus);
    }
    let kernel = kernel_for(u, params)?;
    let sites: Vec<usize> = (0..u.sites()).collect();
    let p = params.p();
    let floor = eps.powf(0.5 * p);
    Ok(ordered_sum(&sites, |x| {
        let ux = u.at(x);
        let mut acc = 0.0;
        for &y in &sites {
            if y != x {
                let d2 = dist2(ux, u.at(y));
                acc += kernel.weight(x, y) * ((d2 + eps).powf(0.5 * p) - floor);
            }
        }
        acc
    }))
}

/// `G(x) = 2p Σ_{y ≠ x} w_xy φ(|u(x) - u(y)|^2) (u(x) - u(y))` with the pair
/// factor `φ` supplied by the caller.
fn pair_gradient(
    u: &VectorField,
    kernel: &PairKernelCache,
    p: f64,
    factor: impl Fn(f64) -> f64 + Sync,
) -> VectorField {
    let n = u.components();
    let m = u.sites();
    let mut out = VectorField::zeros(*u.grid(), n);
    out.samples_mut()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(x, gx)| {
            let ux = u.at(x);
            for y in 0..m {
                if y == x {
                    continue;
                }
                let uy = u.at(y);
                let d2 = dist2(ux, uy);
                let c = kernel.weight(x, y) * factor(d2);
                if c != 0.0 {
                    for k in 0..n {
                        gx[k] += c * (ux[k] - uy[k]);
                    }
                }
            }
            for g in gx.iter_mut() {
                *g *= 2.0 * p;
            }
        });
    out
}

/// Exact gradient of [`energy_regularized`] with respect to the samples.
pub fn energy_gradient(u: &VectorField, params: &EnergyParams) -> Result<VectorField> {
    let p = params.p();
    let eps = params.eps_reg();
    if p < 2.0 && eps == 0.0 {
        return Err(Error::param(
            "eps_reg",
            eps,
            format!("gradient for p = {p} < 2 needs eps_reg > 0"),
        ));
    }
    let kernel = kernel_for(u, params)?;
    Ok(if eps == 0.0 {
        pair_gradient(u, &kernel, p, |d2| degenerate_factor(d2, p))
    } else {
        pair_gradient(u, &kernel, p, |d2| {
            if p == 2.0 {
                1.0
            } else {
                (d2 + eps).powf(0.5 * (p - 2.0))
            }
        })
    })
}

/// `d/dt E((u + tψ)/|u + tψ|)` at `t = 0` for unit `u`: the unregularised
/// gradient paired with the tangential part `ψ - (u·ψ) u`.
pub fn first_variation(u: &VectorField, psi: &VectorField, params: &EnergyParams) -> Result<f64> {
    u.check_shape(psi)?;
    u.ensure_unit(UNIT_TOL)?;
    let kernel = kernel_for(u, params)?;
    let p = params.p();
    let grad = pair_gradient(u, &kernel, p, |d2| degenerate_factor(d2, p));
    let sites: Vec<usize> = (0..u.sites()).collect();
    Ok(ordered_sum(&sites, |x| {
        let ux = u.at(x);
        let px = psi.at(x);
        let radial: f64 = ux.iter().zip(px).map(|(a, b)| a * b).sum();
        grad.at(x)
            .iter()
            .zip(px.iter().zip(ux))
            .map(|(g, (ps, uu))| g * (ps - radial * uu))
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, BallHierarchy, GridSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_unit(grid: GridSpec, n: usize, seed: u64) -> VectorField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = VectorField::zeros(grid, n);
        for x in 0..grid.len() {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            for (dst, a) in u.at_mut(x).iter_mut().zip(v) {
                *dst = a / norm;
            }
        }
        u
    }

    fn random_field(grid: GridSpec, n: usize, seed: u64) -> VectorField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples = (0..grid.len() * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        VectorField::new(grid, n, samples).unwrap()
    }

    fn normalized(u: &VectorField) -> VectorField {
        let mut out = u.clone();
        for x in 0..u.sites() {
            let v = out.at_mut(x);
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
        }
        out
    }

    #[test]
    fn constant_map_has_zero_energy() {
        let g = make_grid(2, 8, 1.0).unwrap();
        let params = EnergyParams::new(2, 0.6, Some(3.0), 0.0, false).unwrap();
        let u = VectorField::constant(g, &[0.6, 0.8]);
        assert_eq!(energy(&u, &params, &Region::Torus).unwrap(), 0.0);
        assert_eq!(seminorm(&u, &params, &Region::Torus).unwrap(), 0.0);
        assert!(energy_gradient(&u, &params).unwrap().norm() == 0.0);
    }

    #[test]
    fn two_site_toy_matches_hand_value() {
        // n = 1, M = 2, L = 2: h = 1, the only pair sits at distance 1.
        let g = GridSpec::raw(1, 2, 2.0);
        let s = 0.5;
        let p = 3.0;
        let params = EnergyParams::new(1, s, Some(p), 0.0, false).unwrap();
        let u = VectorField::new(g, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let expect = 2.0 * 1.0 * 2f64.sqrt().powf(p) / 1f64.powf(1.0 + s * p);
        let got = energy(&u, &params, &Region::Torus).unwrap();
        assert!((got - expect).abs() < 1e-14);
    }

    #[test]
    fn rotation_and_translation_invariance() {
        let g = make_grid(1, 32, 2.0 * PI).unwrap();
        let params = EnergyParams::new(1, 0.4, Some(2.5), 0.0, false).unwrap();
        let u = random_unit(g, 3, 5);
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let q = [c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0];
        let e = energy(&u, &params, &Region::Torus).unwrap();
        let eq = energy(&u.transform(&q), &params, &Region::Torus).unwrap();
        assert!((e - eq).abs() <= 1e-12 * e);
        let es = energy(&u.shifted(7), &params, &Region::Torus).unwrap();
        assert!((e - es).abs() <= 1e-12 * e);
    }

    #[test]
    fn scaling_of_differences() {
        let g = make_grid(1, 32, 2.0 * PI).unwrap();
        let params = EnergyParams::new(1, 0.5, Some(3.0), 0.0, false).unwrap();
        let u = random_field(g, 2, 9);
        let lambda: f64 = -2.5;
        let e = energy(&u, &params, &Region::Torus).unwrap();
        let el = energy(&u.scaled(lambda), &params, &Region::Torus).unwrap();
        assert!((el - lambda.abs().powf(3.0) * e).abs() <= 1e-12 * el);
    }

    #[test]
    fn seminorm_monotone_in_region() {
        let g = make_grid(1, 64, 2.0 * PI).unwrap();
        let params = EnergyParams::new(1, 0.5, None, 0.0, true).unwrap();
        let hier = BallHierarchy::new(g, 10, 0.2, 0, 3).unwrap();
        for seed in 0..4 {
            let u = random_unit(g, 2, seed);
            let mut prev = 0.0;
            for l in 0..=3 {
                let v = seminorm(&u, &params, &Region::Ball(&hier, l)).unwrap();
                assert!(v >= prev);
                prev = v;
            }
            assert!(seminorm(&u, &params, &Region::Torus).unwrap() >= prev);
        }
    }

    #[test]
    fn energy_zero_iff_constant() {
        let g = make_grid(1, 16, 1.0).unwrap();
        let params = EnergyParams::new(1, 0.5, None, 0.0, true).unwrap();
        let mut u = VectorField::constant(g, &[1.0, 0.0]);
        assert_eq!(energy(&u, &params, &Region::Torus).unwrap(), 0.0);
        u.at_mut(3).copy_from_slice(&[0.0, 1.0]);
        assert!(energy(&u, &params, &Region::Torus).unwrap() > 1e-14);
    }

    #[test]
    fn gradient_matches_finite_differences_and_is_equivariant() {
        let g = make_grid(1, 32, 2.0 * PI).unwrap();
        for (p, eps) in [(2.0, 0.0), (3.0, 0.0), (1.5, 1e-3)] {
            let params = EnergyParams::new(1, 0.4, Some(p), eps, false).unwrap();
            let u = random_field(g, 2, 21);
            let psi = random_field(g, 2, 22);
            let grad = energy_gradient(&u, &params).unwrap();
            let dt = 1e-5;
            let ep = energy_regularized(&u.axpy(dt, &psi), &params).unwrap();
            let em = energy_regularized(&u.axpy(-dt, &psi), &params).unwrap();
            let fd = (ep - em) / (2.0 * dt);
            let an = grad.dot(&psi);
            assert!((fd - an).abs() <= 1e-6 * an.abs(), "p = {p}: {fd} vs {an}");

            let q = [0.0, -1.0, 1.0, 0.0];
            let rotated = energy_gradient(&u.transform(&q), &params).unwrap();
            assert!(rotated.max_abs_diff(&grad.transform(&q)) < 1e-12 * grad.norm().max(1.0));
        }
    }

    #[test]
    fn first_variation_examples() {
        let g = make_grid(1, 64, 2.0 * PI).unwrap();
        let params = EnergyParams::new(1, 0.5, None, 0.0, true).unwrap();
        let u = random_unit(g, 3, 4);
        let zero = VectorField::zeros(g, 3);
        assert_eq!(first_variation(&u, &zero, &params).unwrap(), 0.0);

        let mut radial = u.clone();
        for x in 0..u.sites() {
            let lam = 0.5 + x as f64 * 0.01;
            radial.at_mut(x).iter_mut().for_each(|a| *a *= lam);
        }
        assert!(first_variation(&u, &radial, &params).unwrap().abs() < 1e-10);

        let psi = random_field(g, 3, 8);
        let dt = 1e-5;
        let ep = energy(&normalized(&u.axpy(dt, &psi)), &params, &Region::Torus).unwrap();
        let em = energy(&normalized(&u.axpy(-dt, &psi)), &params, &Region::Torus).unwrap();
        let fd = (ep - em) / (2.0 * dt);
        let an = first_variation(&u, &psi, &params).unwrap();
        assert!((fd - an).abs() <= 1e-6 * an.abs());

        let psi2 = random_field(g, 3, 9);
        let sum = first_variation(&u, &psi.axpy(1.0, &psi2), &params).unwrap();
        let parts = an + first_variation(&u, &psi2, &params).unwrap();
        assert!((sum - parts).abs() <= 1e-10 * sum.abs().max(1.0));

        assert!(matches!(
            first_variation(&psi, &psi, &params),
            Err(Error::NotUnit { .. })
        ));
    }
}
