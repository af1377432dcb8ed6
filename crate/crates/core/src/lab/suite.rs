//! Standard probe configurations shared by calibration and regular runs.
//! Calibration and checking use the same configurations with different
//! seeds, so a frozen constant is tested on data it was not fitted to.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::constants::FrozenConstants;
use super::kernel_case::kernel_case_sweep;
use super::probes::{
    band_limited_field, commutator_probe, sample, sobolev_probe, t1_bound_probe, ProbeReport,
    ProbeSample,
};
use crate::energy::{holefill_check, EnergyParams};
use crate::error::{Error, Result};
use crate::frac::{lp_sup_bound_probe, LPBank};
use crate::grid::{make_grid, BallHierarchy, GridSpec, ScalarField, VectorField};

pub const PROBES: [&str; 6] = ["sobolev", "commutator", "kernel_case", "lp_sup", "t1", "holefill"];

/// Seed used to produce the shipped constants.
pub const CALIBRATION_SEED: u64 = 0x5EED_CA11;
/// Multiplier applied to the worst calibration ratio.
pub const SAFETY_FACTOR: f64 = 2.0;
/// Triples per case in the kernel-case probe.
pub const KERNEL_CASE_SAMPLES: usize = 100_000;

/// Human-readable description of each standard configuration.
pub fn probe_config(name: &str) -> Result<&'static str> {
    Ok(match name {
        "sobolev" => "n=1 M=256 L=2pi s=0.5 t=0.25 p=2 (p*=4); 20 band-limited fields, kmax=16",
        "commutator" => "n=1 M=256 L=2pi alpha=0.5 eps=0.25 p=p1=p2=4; 50 band-limited pairs, kmax=16",
        "kernel_case" => "n=1 beta=0.5 eps=0.3; 100000 log-uniform triples per case",
        "lp_sup" => "n=1 M=256 L=2pi s=0.5 t=0.45 p=2; levels 0..=7; 20 band-limited fields, kmax=32",
        "t1" => "n=1 M=32 L=2pi s=0.5 t=0.45 p_s=2; 20 band-limited pairs, kmax=4",
        "holefill" => "n=1 M=128 and n=2 M=16, s=0.5, p=n/s; random and smooth maps; all level pairs",
        _ => {
            return Err(Error::Config {
                key: "probes".into(),
                msg: format!("unknown probe `{name}`"),
            })
        }
    })
}

fn field_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k)
}

fn torus(dim: usize, m: usize) -> GridSpec {
    make_grid(dim, m, 2.0 * PI).expect("standard grid is valid")
}

fn family(grid: GridSpec, count: u64, kmax: usize, seed: u64) -> Vec<(u64, ScalarField)> {
    (0..count)
        .map(|k| (k, band_limited_field(grid, kmax, field_seed(seed, k))))
        .collect()
}

fn pairs(grid: GridSpec, count: u64, kmax: usize, seed: u64) -> Vec<(u64, ScalarField, ScalarField)> {
    (0..count)
        .map(|k| {
            (
                k,
                band_limited_field(grid, kmax, field_seed(seed, 2 * k)),
                band_limited_field(grid, kmax, field_seed(seed, 2 * k + 1)),
            )
        })
        .collect()
}

fn random_unit(grid: GridSpec, n: usize, seed: u64) -> VectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = VectorField::zeros(grid, n);
    for x in 0..grid.len() {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-3);
        for (o, a) in u.at_mut(x).iter_mut().zip(v) {
            *o = a / norm;
        }
    }
    u
}

fn holefill_samples(seed: u64) -> Result<Vec<ProbeSample>> {
    let mut out = Vec::new();
    let mut id = 0u64;
    for (dim, m, radius, levels) in [(1usize, 128usize, 0.2, 3i32), (2, 16, 0.5, 2)] {
        let g = torus(dim, m);
        let params = EnergyParams::new(dim, 0.5, None, 0.0, true)?;
        let hier = BallHierarchy::new(g, g.site([m / 2, m / 2]), radius, 0, levels)?;
        let smooth = VectorField::from_fn(g, 3, |p, out| {
            let th = p[0] + 0.5 * p[1].sin();
            out[0] = 0.6 * th.cos();
            out[1] = 0.6 * th.sin();
            out[2] = 0.8;
        });
        let fields = [random_unit(g, 3, field_seed(seed, id)), smooth];
        for u in &fields {
            for inner in 0..levels {
                for outer in inner + 1..=levels {
                    let hf = holefill_check(u, &hier, inner, outer, &params)?;
                    out.push(sample(id, hf.lhs, hf.rhs));
                    id += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Runs one standard probe. Without constants the report is a calibration
/// run (`frozen_c = None`, always passing).
pub fn run_probe(name: &str, seed: u64, constants: Option<&FrozenConstants>) -> Result<ProbeReport> {
    probe_config(name)?;
    let c = constants.map(|k| k.get(name)).transpose()?;
    match name {
        "sobolev" => sobolev_probe(&family(torus(1, 256), 20, 16, seed), 0.5, 0.25, 2.0, c, seed),
        "commutator" => commutator_probe(
            &pairs(torus(1, 256), 50, 16, seed),
            0.5,
            0.25,
            4.0,
            4.0,
            4.0,
            c,
            seed,
        ),
        "kernel_case" => {
            let stats = kernel_case_sweep(1, 0.5, 0.3, KERNEL_CASE_SAMPLES, seed, c.unwrap_or(f64::INFINITY))?;
            let samples = stats
                .iter()
                .map(|s| sample(s.case as u64, s.worst_lhs, s.worst_rhs))
                .collect();
            let mut report = ProbeReport::from_samples("kernel_case", seed, samples, c);
            report.sample_count = stats.iter().map(|s| s.samples).sum();
            report.violations = stats.iter().map(|s| s.violations).sum();
            report.pass = report.violations == 0;
            Ok(report)
        }
        "lp_sup" => {
            let g = torus(1, 256);
            let bank = LPBank::new(g, 0, 7)?;
            let mut samples = Vec::new();
            for (k, f) in family(g, 20, 32, seed) {
                for row in lp_sup_bound_probe(&f, &bank, 0.5, 0.45, 2.0)? {
                    samples.push(sample(k * 100 + row.level as u64, row.lhs, row.rhs));
                }
            }
            Ok(ProbeReport::from_samples("lp_sup", seed, samples, c))
        }
        "t1" => t1_bound_probe(&pairs(torus(1, 32), 20, 4, seed), 0.5, 0.45, c, seed),
        "holefill" => Ok(ProbeReport::from_samples("holefill", seed, holefill_samples(seed)?, c)),
        _ => unreachable!("validated by probe_config"),
    }
}

/// All standard probes in [`PROBES`] order.
pub fn run_probe_suite(seed: u64, constants: Option<&FrozenConstants>) -> Result<Vec<ProbeReport>> {
    PROBES.iter().map(|name| run_probe(name, seed, constants)).collect()
}
