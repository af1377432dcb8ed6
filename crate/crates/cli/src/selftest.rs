//! In-process checks of the elementary contracts of every module. These are
//! cheap exact or near-exact cases (constants, eigenfunctions, symmetry)
//! that any correct build must satisfy.

use std::f64::consts::PI;
use std::path::Path;

use fracmap::energy::{
    el_residual, energy, energy_gradient, first_variation, holefill_check, t_operator,
    EnergyParams, Region, RieszQuadrature, SignMatrix,
};
use fracmap::frac::{
    commutator_h, frac_laplacian, lp_project, riesz_potential, FracOpParams, LPBank,
};
use fracmap::grid::{make_grid, BallHierarchy, ScalarField, VectorField};
use fracmap::lab::{
    decay_profile, holder_fit, kernel_case_check, lagrange_check, sobolev_exponent,
    FrozenConstants,
};
use fracmap::solver::{el_residual_suite, minimize, project_sphere, tangent_project, SolverConfig};

use crate::{ExitCode, Outcome};

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn critical_1d() -> EnergyParams {
    EnergyParams::new(1, 0.5, None, 0.0, true).expect("valid parameters")
}

fn circle(m: usize) -> VectorField {
    let g = make_grid(1, m, 2.0 * PI).expect("valid grid");
    VectorField::from_fn(g, 2, |p, out| {
        out[0] = p[0].cos();
        out[1] = p[0].sin();
    })
}

fn grid_spacing() -> Result<(), String> {
    let g = make_grid(1, 64, 2.0 * PI).map_err(err)?;
    ensure(g.spacing() == 2.0 * PI / 64.0, || format!("spacing {}", g.spacing()))?;
    ensure(make_grid(2, 16, 1.0).map_err(err)?.len() == 256, || "2-D site count".into())?;
    ensure(make_grid(3, 16, 1.0).is_err(), || "3-D grid accepted".into())
}

fn cutoffs_and_means() -> Result<(), String> {
    let g = make_grid(1, 128, 2.0 * PI).map_err(err)?;
    let h = BallHierarchy::new(g, 64, 0.2, 0, 3).map_err(err)?;
    let eta = h.cutoff_smooth(1).map_err(err)?;
    ensure(eta.samples()[64] == 1.0, || "cutoff is not 1 at the centre".into())?;
    let far = h.grid().position(64)[0] + 2.0 * h.radius(1) + g.spacing();
    let site = (far / g.spacing()).round() as usize;
    ensure(eta.samples()[site] == 0.0, || "cutoff leaks past its support".into())?;
    let c = VectorField::constant(g, &[0.25, -2.0]);
    let mean = h.ball_mean(&c, 2).map_err(err)?;
    ensure(
        (mean[0] - 0.25).abs() < 1e-15 && (mean[1] + 2.0).abs() < 1e-15,
        || format!("mean of a constant is {mean:?}"),
    )
}

fn frac_eigenfunctions() -> Result<(), String> {
    let g = make_grid(1, 64, 2.0 * PI).map_err(err)?;
    let (k, t) = (3.0f64, 0.4);
    let f = ScalarField::from_fn(g, |p| (k * p[0]).cos());
    let up = frac_laplacian(&f, FracOpParams::spectral(t)).map_err(err)?;
    ensure(up.max_abs_diff(&f.map(|v| k.powf(t) * v)) < 1e-12, || "Λ^t cos".into())?;
    let down = riesz_potential(&f, t).map_err(err)?;
    ensure(down.max_abs_diff(&f.map(|v| k.powf(-t) * v)) < 1e-12, || "Λ^-t cos".into())?;
    let back = riesz_potential(&up, t).map_err(err)?;
    ensure(back.max_abs_diff(&f) < 1e-10, || "Λ^-t Λ^t is not the identity".into())?;
    let c = ScalarField::constant(g, 1.5);
    ensure(
        frac_laplacian(&c, FracOpParams::spectral(t)).map_err(err)?.max_abs() == 0.0,
        || "Λ^t of a constant".into(),
    )?;
    ensure(riesz_potential(&c, t).is_err(), || "Λ^-t accepted a constant".into())
}

fn littlewood_paley() -> Result<(), String> {
    let g = make_grid(1, 64, 2.0 * PI).map_err(err)?;
    let bank = LPBank::for_grid(g, 0).map_err(err)?;
    let f = ScalarField::from_fn(g, |p| (8.0 * p[0]).cos());
    let mut alive = Vec::new();
    for j in bank.levels() {
        if lp_project(&f, &bank, j).map_err(err)?.max_abs() > 1e-14 {
            alive.push(j);
        }
    }
    ensure(!alive.is_empty() && alive.iter().all(|j| (2..=4).contains(j)), || {
        format!("mode 8 lives at levels {alive:?}")
    })?;
    let c = ScalarField::constant(g, 2.0);
    for j in bank.levels().filter(|&j| j > 0) {
        ensure(lp_project(&c, &bank, j).map_err(err)?.max_abs() < 1e-14, || {
            format!("constant survives at level {j}")
        })?;
    }
    Ok(())
}

fn commutator() -> Result<(), String> {
    let g = make_grid(1, 64, 2.0 * PI).map_err(err)?;
    let a = ScalarField::from_fn(g, |p| p[0].sin() + 0.3 * (2.0 * p[0]).cos());
    let b = ScalarField::from_fn(g, |p| (3.0 * p[0]).cos());
    let c = ScalarField::constant(g, 0.7);
    ensure(commutator_h(&a, &c, 0.5).map_err(err)?.max_abs() < 1e-10, || "H(a, c)".into())?;
    let ab = commutator_h(&a, &b, 0.5).map_err(err)?;
    let ba = commutator_h(&b, &a, 0.5).map_err(err)?;
    ensure(ab.samples() == ba.samples(), || "H is not symmetric".into())
}

fn energy_contracts() -> Result<(), String> {
    let params = critical_1d();
    let u = circle(32);
    let c = VectorField::constant(*u.grid(), &[0.6, 0.8]);
    ensure(energy(&c, &params, &Region::Torus).map_err(err)? == 0.0, || "E(const)".into())?;
    let e = energy(&u, &params, &Region::Torus).map_err(err)?;
    let (cq, sq) = (0.3f64.cos(), 0.3f64.sin());
    let rotated = u.transform(&[cq, -sq, sq, cq]);
    let er = energy(&rotated, &params, &Region::Torus).map_err(err)?;
    ensure((e - er).abs() <= 1e-12 * e, || format!("rotation changed E: {e} vs {er}"))?;
    let zero = VectorField::zeros(*u.grid(), 2);
    ensure(first_variation(&u, &zero, &params).map_err(err)? == 0.0, || "δE[0]".into())?;
    let radial = u.scaled(1.0);
    let dv = first_variation(&u, &radial, &params).map_err(err)?;
    ensure(dv.abs() < 1e-10, || format!("radial variation {dv}"))?;
    let g = energy_gradient(&c, &params).map_err(err)?;
    ensure(g.norm() == 0.0, || "gradient at a constant".into())
}

fn euler_lagrange() -> Result<(), String> {
    let params = critical_1d();
    let u = circle(32);
    let phi = ScalarField::from_fn(*u.grid(), |p| p[0].sin().max(0.0));
    let zero = SignMatrix::zero(2);
    ensure(el_residual(&u, &phi, &zero, &params, &Region::Torus).map_err(err)? == 0.0, || {
        "ω = 0".into()
    })?;
    let c = VectorField::constant(*u.grid(), &[1.0, 0.0]);
    let om = SignMatrix::elementary(2, 0, 1);
    ensure(el_residual(&c, &phi, &om, &params, &Region::Torus).map_err(err)? == 0.0, || {
        "constant map".into()
    })?;
    ensure(SignMatrix::elementary_family(2).len() == 1, || "N = 2 family".into())?;
    let g = make_grid(1, 64, 2.0 * PI).map_err(err)?;
    let h = BallHierarchy::new(g, 32, 0.25, 0, 3).map_err(err)?;
    let cc = VectorField::constant(g, &[0.0, 1.0]);
    let suite = el_residual_suite(&cc, &params, 4, &Region::Ball(&h, 3)).map_err(err)?;
    ensure(suite.max_abs == 0.0, || "suite on a constant".into())
}

fn t_operator_and_holefill() -> Result<(), String> {
    let params = critical_1d();
    let g = make_grid(1, 64, 2.0 * PI).map_err(err)?;
    let h = BallHierarchy::new(g, 32, 0.25, 0, 3).map_err(err)?;
    let c = VectorField::constant(g, &[0.0, 1.0]);
    let t = t_operator(&c, &Region::Ball(&h, 2), 0.45, &params, RieszQuadrature::default_for(&g))
        .map_err(err)?;
    ensure(t.norm() == 0.0, || "T of a constant".into())?;
    let hf = holefill_check(&c, &h, 1, 2, &params).map_err(err)?;
    ensure(hf.pass && hf.lhs == 0.0 && hf.rhs == 0.0, || "hole filling on a constant".into())
}

fn projections() -> Result<(), String> {
    let g = make_grid(1, 16, 2.0 * PI).map_err(err)?;
    let u = circle(16);
    ensure(project_sphere(&u).map_err(err)?.max_abs_diff(&u) <= 1e-15, || {
        "projection is not idempotent".into()
    })?;
    let v = VectorField::constant(g, &[3.0, 4.0]);
    let pv = project_sphere(&v).map_err(err)?;
    ensure(pv.at(0) == [0.6, 0.8], || format!("(3,4) -> {:?}", pv.at(0)))?;
    ensure(project_sphere(&v.scaled(7.0)).map_err(err)? == pv, || "scale invariance".into())?;
    ensure(tangent_project(&u, &u).map_err(err)?.norm() < 1e-15, || "g = u".into())?;
    let perp = VectorField::from_fn(g, 2, |p, out| {
        out[0] = -p[0].sin();
        out[1] = p[0].cos();
    });
    ensure(tangent_project(&perp, &u).map_err(err)?.max_abs_diff(&perp) < 1e-15, || {
        "tangential field changed".into()
    })
}

fn solver_constant() -> Result<(), String> {
    let g = make_grid(1, 16, 2.0 * PI).map_err(err)?;
    let c = VectorField::constant(g, &[1.0, 0.0]);
    let (_, r) = minimize(&c, &critical_1d(), &SolverConfig::default()).map_err(err)?;
    ensure(r.converged && r.iterations == 0 && r.final_grad_norm == 0.0, || {
        format!("constant start: {r:?}")
    })
}

fn lab_contracts() -> Result<(), String> {
    let params = critical_1d();
    let g = make_grid(1, 128, 2.0 * PI).map_err(err)?;
    let h = BallHierarchy::new(g, 64, 0.2, 0, 3).map_err(err)?;
    let c = VectorField::constant(g, &[1.0, 0.0]);
    let d = decay_profile(&c, &h, &params).map_err(err)?;
    ensure(d.theta.is_none() && d.rows.iter().all(|r| r.energy == 0.0), || {
        "decay of a constant".into()
    })?;
    let fit = holder_fit(&circle(64), &[0.5, 1.0]).map_err(err)?;
    ensure(fit.best_beta == Some(1.0), || format!("Lipschitz map: {:?}", fit.best_beta))?;
    let l = lagrange_check(&[1.0, 0.0], &[1.0, 0.0]).map_err(err)?;
    ensure(l.lhs == 1.0 && l.rhs == 1.0 && l.equal, || "radial Lagrange".into())?;
    let l = lagrange_check(&[1.0, 0.0], &[0.0, 1.0]).map_err(err)?;
    ensure(l.lhs == 1.0 && l.rhs == 1.0 && l.equal, || "tangential Lagrange".into())?;
    let k = kernel_case_check(&[0.5], &[0.5], &[3.0], 0.5, 0.3, 1.0).map_err(err)?;
    ensure(k.lhs == 0.0 && k.pass, || "x = y".into())?;
    let p = sobolev_exponent(1, 0.5, 0.25, 2.0).map_err(err)?;
    ensure((p - 4.0).abs() < 1e-15, || format!("p* = {p}"))
}

fn embedded_constants() -> Result<(), String> {
    let c = FrozenConstants::embedded();
    FrozenConstants::from_json(&c.to_json()).map_err(err)?;
    Ok(())
}

/// Named checks run by [`cmd_selftest`].
pub const SELFTEST_CASES: &[(&str, Check)] = &[
    ("grid", grid_spacing),
    ("cutoffs", cutoffs_and_means),
    ("fractional operators", frac_eigenfunctions),
    ("littlewood-paley", littlewood_paley),
    ("commutator", commutator),
    ("energy", energy_contracts),
    ("euler-lagrange", euler_lagrange),
    ("t-operator and hole filling", t_operator_and_holefill),
    ("sphere projections", projections),
    ("solver", solver_constant),
    ("regularity lab", lab_contracts),
    ("frozen constants", embedded_constants),
];

/// Runs every self-check; `constants` additionally validates a frozen
/// constants file (digest included).
pub fn cmd_selftest(constants: Option<&Path>) -> Outcome {
    let mut lines = Vec::new();
    let mut failed = 0;
    for (name, check) in SELFTEST_CASES {
        let res = check();
        if res.is_err() {
            failed += 1;
        }
        lines.push(match res {
            Ok(()) => format!("  ok    {name}"),
            Err(e) => format!("  FAIL  {name}: {e}"),
        });
    }
    if let Some(path) = constants {
        match FrozenConstants::load(path) {
            Ok(_) => lines.push(format!("  ok    constants file {}", path.display())),
            Err(e) => {
                failed += 1;
                lines.push(format!("  FAIL  constants file {}: {e}", path.display()));
            }
        }
    }
    Outcome {
        code: if failed == 0 { ExitCode::Pass } else { ExitCode::VerifyFailed },
        summary: format!(
            "selftest: {} ({failed} failed)\n{}",
            if failed == 0 { "pass" } else { "FAIL" },
            lines.join("\n")
        ),
        files: Vec::new(),
    }
}
