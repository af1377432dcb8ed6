//! Property-based invariants of the discretised operators.

use std::f64::consts::PI;

use fracmap::energy::{
    el_residual, energy, energy_gradient, holefill_check, EnergyParams, KernelMode,
    PairKernelCache, Region, SignMatrix,
};
use fracmap::frac::{commutator_h, frac_laplacian, lp_project, riesz_potential, FracOpParams, LPBank};
use fracmap::grid::{make_grid, BallHierarchy, GridSpec, ScalarField, VectorField};
use fracmap::lab::{lagrange_check, sobolev_exponent};
use fracmap::solver::{project_sphere, tangent_project};
use proptest::prelude::*;

fn grid_1d(m: usize) -> GridSpec {
    make_grid(1, m, 2.0 * PI).unwrap()
}

/// Unit field from raw samples (components drawn away from the origin).
fn unit_field(grid: GridSpec, n: usize, raw: &[f64]) -> VectorField {
    let mut u = VectorField::new(grid, n, raw.to_vec()).unwrap();
    for x in 0..grid.len() {
        let v = u.at_mut(x);
        v[0] += 2.5;
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
    }
    u
}

fn rotation3(a: f64, b: f64, c: f64) -> Vec<f64> {
    let rz = |t: f64| [t.cos(), -t.sin(), 0.0, t.sin(), t.cos(), 0.0, 0.0, 0.0, 1.0];
    let rx = |t: f64| [1.0, 0.0, 0.0, 0.0, t.cos(), -t.sin(), 0.0, t.sin(), t.cos()];
    let mul = |p: [f64; 9], q: [f64; 9]| {
        let mut r = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                r[i * 3 + j] = (0..3).map(|k| p[i * 3 + k] * q[k * 3 + j]).sum();
            }
        }
        r
    };
    mul(mul(rz(a), rx(b)), rz(c)).to_vec()
}

fn samples(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn energy_is_rotation_and_translation_invariant(
        raw in samples(16 * 3),
        angles in (0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI),
        shift in 0usize..16,
        s in 0.25f64..0.5,
    ) {
        let g = grid_1d(16);
        let params = EnergyParams::new(1, s, None, 0.0, true).unwrap();
        let u = unit_field(g, 3, &raw);
        let e = energy(&u, &params, &Region::Torus).unwrap();
        prop_assert!(e >= 0.0);
        let q = rotation3(angles.0, angles.1, angles.2);
        let er = energy(&u.transform(&q), &params, &Region::Torus).unwrap();
        prop_assert!(e == 0.0 && er.abs() <= 1e-20 || rel(er, e) <= 1e-12, "rotation: {} vs {}", er, e);
        let et = energy(&u.shifted(shift), &params, &Region::Torus).unwrap();
        prop_assert!(rel(et, e) <= 1e-12, "translation: {} vs {}", et, e);
    }

    #[test]
    fn gradient_is_equivariant(
        raw in samples(16 * 3),
        angles in (0.0..2.0 * PI, 0.0..PI, 0.0..2.0 * PI),
    ) {
        let g = grid_1d(16);
        let params = EnergyParams::new(1, 0.4, Some(3.0), 0.0, false).unwrap();
        let u = unit_field(g, 3, &raw);
        let q = rotation3(angles.0, angles.1, angles.2);
        let lhs = energy_gradient(&u.transform(&q), &params).unwrap();
        let rhs = energy_gradient(&u, &params).unwrap().transform(&q);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn localised_energy_grows_with_the_ball_and_hole_filling_holds(
        raw in samples(64 * 2),
        center in 0usize..64,
    ) {
        let g = grid_1d(64);
        let params = EnergyParams::new(1, 0.5, None, 0.0, true).unwrap();
        let u = unit_field(g, 2, &raw);
        let hier = BallHierarchy::new(g, center, 0.2, 0, 3).unwrap();
        let mut prev = 0.0;
        for level in 0..=3 {
            let e = energy(&u, &params, &Region::Ball(&hier, level)).unwrap();
            prop_assert!(e >= prev);
            prev = e;
        }
        for level in 1..=3 {
            prop_assert!(holefill_check(&u, &hier, level - 1, level, &params).unwrap().pass);
        }
    }

    #[test]
    fn el_residual_is_odd_in_omega_and_linear_in_phi(
        raw in samples(16 * 3),
        phi_raw in samples(16),
        scale in -3.0f64..3.0,
    ) {
        let g = grid_1d(16);
        let params = EnergyParams::new(1, 0.5, None, 0.0, true).unwrap();
        let u = unit_field(g, 3, &raw);
        let phi = ScalarField::new(g, phi_raw).unwrap();
        for om in SignMatrix::elementary_family(3) {
            let a = el_residual(&u, &phi, &om, &params, &Region::Torus).unwrap();
            let b = el_residual(&u, &phi, &om.negated(), &params, &Region::Torus).unwrap();
            prop_assert_eq!(a, -b);
            let c = el_residual(&u, &phi.map(|v| scale * v), &om, &params, &Region::Torus).unwrap();
            prop_assert!((c - scale * a).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn sphere_projections(raw in samples(32 * 3), g_raw in samples(32 * 3), scale in 0.1f64..10.0) {
        let g = grid_1d(32);
        let v = VectorField::new(g, 3, raw.iter().map(|a| a + 2.0).collect()).unwrap();
        let u = project_sphere(&v).unwrap();
        prop_assert!(u.is_unit(1e-14));
        prop_assert!(project_sphere(&u).unwrap().max_abs_diff(&u) <= 1e-15);
        prop_assert!(project_sphere(&v.scaled(scale)).unwrap().max_abs_diff(&u) <= 1e-15);
        let gr = VectorField::new(g, 3, g_raw).unwrap();
        let t = tangent_project(&gr, &u).unwrap();
        for x in 0..g.len() {
            let d: f64 = t.at(x).iter().zip(u.at(x)).map(|(a, b)| a * b).sum();
            prop_assert!(d.abs() <= 1e-14);
        }
    }

    #[test]
    fn fractional_operators(raw in samples(64), t in 0.05f64..0.95, alpha in 0.05f64..0.95, c in -5.0f64..5.0) {
        let g = grid_1d(64);
        let f = ScalarField::new(g, raw).unwrap();
        let f0 = f.map(|v| v - f.mean());
        let up = frac_laplacian(&f0, FracOpParams::spectral(t)).unwrap();
        prop_assert!(riesz_potential(&up, t).unwrap().max_abs_diff(&f0) <= 1e-10);
        prop_assert!(up.mean().abs() <= 1e-12);
        let bank = LPBank::for_grid(g, 0).unwrap();
        let mut total = ScalarField::zeros(g);
        for j in bank.levels() {
            total = total.zip_with(&lp_project(&f, &bank, j).unwrap(), |a, b| a + b);
        }
        prop_assert!(total.max_abs_diff(&f0) <= 1e-10);
        let h = commutator_h(&f, &ScalarField::constant(g, c), alpha).unwrap();
        prop_assert!(h.max_abs() <= 1e-10);
    }

    #[test]
    fn lagrange_identity(n in 2usize..7, raw in samples(7), v in samples(7)) {
        let u: Vec<f64> = raw[..n].iter().enumerate().map(|(i, a)| if i == 0 { a + 2.0 } else { *a }).collect();
        let norm = u.iter().map(|a| a * a).sum::<f64>().sqrt();
        let u: Vec<f64> = u.iter().map(|a| a / norm).collect();
        let r = lagrange_check(&u, &v[..n]).unwrap();
        prop_assert!(r.equal && r.bound_holds);
        prop_assert!((r.lhs - r.rhs).abs() <= 1e-12);
    }

    #[test]
    fn sobolev_exponent_matches_formula(
        num_s in 1u32..9, num_t in 0u32..9, p10 in 11u32..40, n in 1usize..3,
    ) {
        let s = num_s as f64 / 10.0;
        let t = num_t as f64 / 10.0;
        let p = p10 as f64 / 10.0;
        let nf = n as f64;
        match sobolev_exponent(n, s, t, p) {
            Ok(ps) => {
                prop_assert!(t < s && (s - t) * p < nf);
                prop_assert!((ps - nf * p / (nf - (s - t) * p)).abs() <= 1e-12 * ps);
            }
            Err(_) => prop_assert!(t >= s || (s - t) * p >= nf),
        }
    }
}

#[test]
fn kernel_modes_agree_bitwise_in_two_dimensions() {
    let g = make_grid(2, 8, 1.0).unwrap();
    let a = PairKernelCache::new(g, 3.0, KernelMode::Cached);
    let b = PairKernelCache::new(g, 3.0, KernelMode::Streamed);
    for x in 0..g.len() {
        for y in 0..g.len() {
            assert_eq!(a.weight(x, y).to_bits(), b.weight(x, y).to_bits());
        }
    }
}
