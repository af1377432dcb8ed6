//! Projected gradient descent on the sphere-constrained energy and the
//! Euler–Lagrange residual suite that certifies its output.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::energy::{
    el_residual, energy_gradient, energy_regularized, seminorm, EnergyParams, Region, SignMatrix,
};
use crate::error::{Error, Result};
use crate::grid::{GridSpec, ScalarField, VectorField};

/// Samples with a smaller norm cannot be projected onto the sphere.
pub const NEAR_ZERO_NORM: f64 = 1e-8;
/// Consecutive rejected trial steps after which the line search gives up.
pub const MAX_BACKTRACKS: usize = 60;
/// Bumps thinner than this many grid spacings are rejected.
const MIN_BUMP_CELLS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub max_iters: usize,
    pub step0: f64,
    pub armijo_c: f64,
    pub armijo_shrink: f64,
    /// Absolute tolerance on the Euclidean norm of the tangential gradient.
    pub grad_tol: f64,
    /// Relative tolerance on the per-step energy decrease.
    pub energy_tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iters: 20_000,
            step0: 1.0,
            armijo_c: 1e-4,
            armijo_shrink: 0.5,
            grad_tol: 1e-10,
            energy_tol: 1e-15,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("step0", self.step0),
            ("grad_tol", self.grad_tol),
            ("energy_tol", self.energy_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::param(name, v, "must be positive and finite"));
            }
        }
        for (name, v) in [("armijo_c", self.armijo_c), ("armijo_shrink", self.armijo_shrink)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::param(name, v, "must lie in (0, 1)"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    GradTol,
    EnergyTol,
    MaxIters,
    LineSearchFailed,
}

impl StopReason {
    pub fn converged(self) -> bool {
        matches!(self, StopReason::GradTol | StopReason::EnergyTol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Energy of the initial iterate followed by every accepted step.
    pub energy_trace: Vec<f64>,
    /// Accepted step sizes, one per iteration.
    pub step_trace: Vec<f64>,
    /// Tangential gradient norm at every iterate.
    pub grad_norm_trace: Vec<f64>,
    pub final_grad_norm: f64,
    /// Filled in by callers that run [`el_residual_suite`].
    pub final_el_residual: Option<f64>,
    pub converged: bool,
    pub stop_reason: StopReason,
    /// Wall time in seconds; not serialised so reports stay reproducible.
    #[serde(skip)]
    pub wall_time: f64,
}

impl SolveReport {
    pub fn final_energy(&self) -> f64 {
        *self.energy_trace.last().expect("trace holds the initial energy")
    }

    pub fn is_monotone(&self) -> bool {
        self.energy_trace.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Divide every sample by its Euclidean norm.
pub fn project_sphere(u: &VectorField) -> Result<VectorField> {
    let mut out = u.clone();
    let n = u.components();
    for (site, v) in out.samples_mut().chunks_mut(n).enumerate() {
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm >= NEAR_ZERO_NORM) {
            return Err(Error::NearZero { site, norm });
        }
        for a in v.iter_mut() {
            *a /= norm;
        }
    }
    Ok(out)
}

/// `g(x) - (u(x)·g(x)) u(x)` at every site.
pub fn tangent_project(g: &VectorField, u: &VectorField) -> Result<VectorField> {
    g.check_shape(u)?;
    let n = u.components();
    let mut out = g.clone();
    for (x, gx) in out.samples_mut().chunks_mut(n).enumerate() {
        let ux = u.at(x);
        let radial: f64 = ux.iter().zip(gx.iter()).map(|(a, b)| a * b).sum();
        for (gk, uk) in gx.iter_mut().zip(ux) {
            *gk -= radial * uk;
        }
    }
    Ok(out)
}

/// Projected gradient descent with radial retraction and Armijo backtracking
/// on `E(project(u - τ g_T))`. The initial trial step of each iteration is
/// `min(step0, 2 τ_prev)`.
pub fn minimize(
    u0: &VectorField,
    params: &EnergyParams,
    cfg: &SolverConfig,
) -> Result<(VectorField, SolveReport)> {
    cfg.validate()?;
    let start = Instant::now();
    let mut u = project_sphere(u0)?;
    let mut e = energy_regularized(&u, params)?;
    let mut gt = tangent_project(&energy_gradient(&u, params)?, &u)?;
    let mut gnorm = gt.norm();
    let mut report = SolveReport {
        iterations: 0,
        energy_trace: vec![e],
        step_trace: Vec::new(),
        grad_norm_trace: vec![gnorm],
        final_grad_norm: gnorm,
        final_el_residual: None,
        converged: false,
        stop_reason: StopReason::MaxIters,
        wall_time: 0.0,
    };
    let mut tau_prev = cfg.step0;
    let stop = loop {
        if gnorm <= cfg.grad_tol {
            break StopReason::GradTol;
        }
        if report.iterations >= cfg.max_iters {
            break StopReason::MaxIters;
        }
        let mut tau = cfg.step0.min(2.0 * tau_prev);
        let g2 = gnorm * gnorm;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial = project_sphere(&u.axpy(-tau, &gt))?;
            let et = energy_regularized(&trial, params)?;
            if et <= e - cfg.armijo_c * tau * g2 {
                accepted = Some((trial, et));
                break;
            }
            tau *= cfg.armijo_shrink;
        }
        let Some((next, en)) = accepted else {
            break StopReason::LineSearchFailed;
        };
        let decrease = e - en;
        u = next;
        e = en;
        tau_prev = tau;
        gt = tangent_project(&energy_gradient(&u, params)?, &u)?;
        gnorm = gt.norm();
        report.iterations += 1;
        report.energy_trace.push(e);
        report.step_trace.push(tau);
        report.grad_norm_trace.push(gnorm);
        if decrease <= cfg.energy_tol * e.abs() && gnorm > cfg.grad_tol {
            break StopReason::EnergyTol;
        }
    };
    report.final_grad_norm = gnorm;
    report.stop_reason = stop;
    report.converged = stop.converged();
    report.wall_time = start.elapsed().as_secs_f64();
    Ok((u, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElResidualEntry {
    pub bump: usize,
    pub center: [f64; 2],
    pub radius: f64,
    /// Indices `(i, j)` of the elementary matrix `e_i e_j^T - e_j e_i^T`.
    pub omega: (usize, usize),
    /// `+1` for the elementary matrix, `-1` for its negative.
    pub sign: i8,
    pub value: f64,
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElResidualReport {
    pub entries: Vec<ElResidualEntry>,
    pub max_abs: f64,
    pub max_normalized: f64,
    pub basis: String,
}

/// Smooth bump `exp(1 - 1 / (1 - (d/ρ)^2))` with peak 1 at `center`.
pub fn bump(grid: &GridSpec, center: [f64; 2], radius: f64) -> ScalarField {
    let samples = (0..grid.len())
        .map(|x| {
            let r = grid.distance_to_point(x, center) / radius;
            if r < 1.0 {
                (1.0 - 1.0 / (1.0 - r * r)).exp()
            } else {
                0.0
            }
        })
        .collect();
    ScalarField::new(*grid, samples).expect("sample count matches grid")
}

/// Centres and radii of `count` bumps supported in the ball of radius `r`
/// around `center`: radii alternate between `r/2` and `3r/8`, centres walk
/// outward along the coordinate axes.
fn bump_basis(grid: &GridSpec, center: [f64; 2], r: f64, count: usize) -> Vec<([f64; 2], f64)> {
    let dirs: Vec<[f64; 2]> = if grid.dim() == 1 {
        vec![[1.0, 0.0], [-1.0, 0.0]]
    } else {
        vec![[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]
    };
    let l = grid.box_length();
    (0..count)
        .map(|k| {
            let rho = if k % 2 == 0 { 0.5 * r } else { 0.375 * r };
            let shift = (r - rho) * k as f64 / count as f64;
            let d = dirs[k % dirs.len()];
            let mut c = [0.0; 2];
            for a in 0..grid.dim() {
                c[a] = (center[a] + shift * d[a]).rem_euclid(l);
            }
            (c, rho)
        })
        .collect()
}

/// Euler–Lagrange residuals for a deterministic family of bump test
/// functions supported in `support` (crossed with every elementary
/// antisymmetric matrix and its negative). The double sums always run over
/// the whole torus: at a discrete critical point these are exact first
/// variations and vanish, whereas sums truncated to a ball do not.
pub fn el_residual_suite(
    u: &VectorField,
    params: &EnergyParams,
    basis_size: usize,
    support: &Region,
) -> Result<ElResidualReport> {
    if basis_size == 0 {
        return Err(Error::Degenerate("empty test-function basis".into()));
    }
    let grid = *u.grid();
    let (center, r) = match support {
        Region::Torus => ([0.5 * grid.box_length(); 2], 0.25 * grid.box_length()),
        Region::Ball(h, level) => {
            h.check_ball(*level)?;
            (grid.position(h.center()), h.radius(*level))
        }
    };
    let basis = bump_basis(&grid, center, r, basis_size);
    if let Some(&(_, rho)) = basis.iter().find(|(_, rho)| *rho < MIN_BUMP_CELLS * grid.spacing()) {
        return Err(Error::Degenerate(format!(
            "support radius {r} too small for a bump of radius {rho} on spacing {}",
            grid.spacing()
        )));
    }
    let u_semi = seminorm(u, params, &Region::Torus)?;
    let u_scale = u_semi.powf(params.p() - 1.0);
    let omegas = SignMatrix::elementary_family(u.components());
    let mut entries = Vec::new();
    for (k, &(c, rho)) in basis.iter().enumerate() {
        let phi = bump(&grid, c, rho);
        let phi_semi = seminorm(&phi.to_vector(), params, &Region::Torus)?;
        let scale = phi_semi * u_scale;
        for om in &omegas {
            let (i, j) = (0..om.size())
                .flat_map(|i| (0..om.size()).map(move |j| (i, j)))
                .find(|&(i, j)| om.get(i, j) == 1)
                .expect("elementary matrix has a +1 entry");
            for (sign, mat) in [(1i8, om.clone()), (-1i8, om.negated())] {
                let value = el_residual(u, &phi, &mat, params, &Region::Torus)?;
                let normalized = if value == 0.0 { 0.0 } else { value.abs() / scale };
                entries.push(ElResidualEntry {
                    bump: k,
                    center: c,
                    radius: rho,
                    omega: (i, j),
                    sign,
                    value,
                    normalized,
                });
            }
        }
    }
    let max_abs = entries.iter().fold(0.0f64, |m, e| m.max(e.value.abs()));
    let max_normalized = entries.iter().fold(0.0f64, |m, e| m.max(e.normalized));
    Ok(ElResidualReport {
        entries,
        max_abs,
        max_normalized,
        basis: format!(
            "{basis_size} bumps exp(1 - 1/(1 - (d/rho)^2)) in radius {r} around {center:?}, \
             {} elementary omegas and negatives",
            omegas.len()
        ),
    })
}
