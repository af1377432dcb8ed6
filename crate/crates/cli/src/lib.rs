//! Subcommands of the `fracmap` binary, callable in-process.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 configuration error,
//! 3 non-convergence.

mod selftest;

use std::path::{Path, PathBuf};

use fracmap::energy::{duality_sides, holefill_check, HoleFill, Region};
use fracmap::error::Error;
use fracmap::grid::VectorField;
use fracmap::io::{
    load_config, probe_run_hash, read_field, write_checkpoint, CommutatorExponents, Report, ReportWriter,
    RunConfig, RunManifest,
};
use fracmap::lab::{
    decay_profile, holder_fit, run_probe, FrozenConstants, MIN_DECAY_LEVELS, PROBES,
};
use fracmap::solver::{bump, el_residual_suite, minimize, project_sphere};
use serde_json::json;

pub use selftest::{cmd_selftest, SELFTEST_CASES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Pass = 0,
    VerifyFailed = 1,
    ConfigError = 2,
    NonConvergence = 3,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Result of a subcommand: exit code, a short human-readable summary and
/// the files written.
#[derive(Debug)]
pub struct Outcome {
    pub code: ExitCode,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn error(code: ExitCode, e: impl std::fmt::Display) -> Self {
        Self {
            code,
            summary: format!("error: {e}"),
            files: Vec::new(),
        }
    }
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Default)]
pub struct CommonOpts {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub overrides: Vec<String>,
    /// Worker threads; `None` uses every logical core.
    pub workers: Option<usize>,
    pub seed: Option<u64>,
}

/// Largest grid at which the duality check gates `verify`; finer 1-D grids
/// only get more accurate, 2-D uses the uncorrected kernel and is reported
/// without gating.
const DUALITY_GATED_DIM: usize = 1;

/// Runs `f` on a dedicated pool with the requested number of workers.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w.max(1));
    }
    match builder.build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn load(opts: &CommonOpts) -> Result<RunConfig, Outcome> {
    let path = opts
        .config
        .as_deref()
        .ok_or_else(|| Outcome::error(ExitCode::ConfigError, "--config is required"))?;
    let mut overrides = opts.overrides.clone();
    if let Some(seed) = opts.seed {
        overrides.push(format!("seed={seed}"));
    }
    load_config(path, &overrides).map_err(|e| Outcome::error(ExitCode::ConfigError, e))
}

fn out_dir(opts: &CommonOpts, cfg: Option<&RunConfig>) -> PathBuf {
    opts.out
        .clone()
        .or_else(|| cfg.map(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn workers(opts: &CommonOpts) -> usize {
    opts.workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn runtime_failure(e: Error) -> Outcome {
    let code = match e {
        Error::Io { .. }
        | Error::Config { .. }
        | Error::Parse(_)
        | Error::Parameter { .. }
        | Error::InvalidGrid(_)
        | Error::LevelOutOfRange { .. }
        | Error::BallOverflow { .. }
        | Error::EmptyBall { .. }
        | Error::Degenerate(_) => ExitCode::ConfigError,
        _ => ExitCode::VerifyFailed,
    };
    Outcome::error(code, e)
}

fn manifest(command: &str, cfg: &RunConfig, opts: &CommonOpts) -> RunManifest {
    let mut m = RunManifest::start(command, &cfg.hash(), workers(opts));
    m.derived = cfg.derived().ok();
    m
}

/// Minimise from the configured initial map, certify the result with the
/// Euler–Lagrange suite and record its decay profile.
pub fn cmd_solve(opts: &CommonOpts) -> Outcome {
    let cfg = match load(opts) {
        Ok(c) => c,
        Err(o) => return o,
    };
    with_workers(opts.workers, || solve_inner(&cfg, opts).unwrap_or_else(runtime_failure))
}

fn solve_inner(cfg: &RunConfig, opts: &CommonOpts) -> fracmap::Result<Outcome> {
    let manifest = manifest("solve", cfg, opts);
    let params = cfg.energy_params()?;
    let hier = cfg.hierarchy()?;
    let u0 = cfg.initial_field()?;
    let (u, mut report) = minimize(&u0, &params, &cfg.solver)?;
    let (_, top) = hier.level_range();
    let suite = el_residual_suite(&u, &params, cfg.verify.basis_size, &Region::Ball(&hier, top))?;
    report.final_el_residual = Some(suite.max_normalized);
    let (lo, hi) = hier.level_range();
    let decay = if (hi - lo + 1) as usize >= MIN_DECAY_LEVELS {
        Some(decay_profile(&u, &hier, &params)?)
    } else {
        None
    };

    let mut w = ReportWriter::new(&out_dir(opts, Some(cfg)), &manifest.config_hash)?;
    let mut files = w.emit(Report::Solve(&report))?;
    files.extend(w.emit(Report::ElResiduals(&suite))?);
    if let Some(d) = &decay {
        files.extend(w.emit(Report::Decay(d))?);
    }
    let field_path = w.path_for("field", "fmf");
    write_checkpoint(&field_path, &u, &params, report.iterations)?;
    w.record(&field_path);
    files.push(field_path);
    files.push(w.finish(manifest)?);

    let residual_ok = suite.max_normalized <= cfg.verify.el_tolerance;
    let code = if !report.converged {
        ExitCode::NonConvergence
    } else if !residual_ok {
        ExitCode::VerifyFailed
    } else {
        ExitCode::Pass
    };
    let theta = decay
        .as_ref()
        .and_then(|d| d.theta)
        .map_or("undefined".to_string(), |t| format!("{t:.4}"));
    Ok(Outcome {
        code,
        summary: format!(
            "solve: {} after {} iterations ({:?}), energy {:.12e}, tangential gradient {:.3e}, \
             normalised EL residual {:.3e} (tolerance {:.1e}), decay exponent {theta}",
            if report.converged { "converged" } else { "not converged" },
            report.iterations,
            report.stop_reason,
            report.final_energy(),
            report.final_grad_norm,
            suite.max_normalized,
            cfg.verify.el_tolerance,
        ),
        files,
    })
}

/// Check a stored field: Euler–Lagrange residuals, hole filling on every
/// pair of consecutive levels and the duality identity of `T_{B,t}`.
pub fn cmd_verify(opts: &CommonOpts, field: &Path) -> Outcome {
    let cfg = match load(opts) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let u = match read_field(field) {
        Ok((u, _)) => u,
        Err(e) => return Outcome::error(ExitCode::ConfigError, e),
    };
    match cfg.grid_spec() {
        Ok(g) if g == *u.grid() => {}
        Ok(g) => {
            return Outcome::error(
                ExitCode::ConfigError,
                format!("field grid {:?} differs from configured grid {g:?}", u.grid()),
            )
        }
        Err(e) => return Outcome::error(ExitCode::ConfigError, e),
    }
    with_workers(opts.workers, || verify_inner(&cfg, opts, &u).unwrap_or_else(runtime_failure))
}

fn verify_inner(cfg: &RunConfig, opts: &CommonOpts, u: &VectorField) -> fracmap::Result<Outcome> {
    let manifest = manifest("verify", cfg, opts);
    let mut w = ReportWriter::new(&out_dir(opts, Some(cfg)), &manifest.config_hash)?;
    let mut files = Vec::new();
    if !u.is_unit(1e-12) {
        let doc = json!({
            "schema_version": 1,
            "pass": false,
            "reason": "field is not unit-constrained",
        });
        files.extend(w.emit(Report::Json("verify", &doc))?);
        files.push(w.finish(manifest)?);
        return Ok(Outcome {
            code: ExitCode::VerifyFailed,
            summary: "verify: field is not unit-constrained".into(),
            files,
        });
    }
    let params = cfg.energy_params()?;
    let hier = cfg.hierarchy()?;
    let (lo, hi) = hier.level_range();
    let suite = el_residual_suite(u, &params, cfg.verify.basis_size, &Region::Ball(&hier, hi))?;
    let el_ok = suite.max_normalized <= cfg.verify.el_tolerance;

    let holefill: Vec<(i32, i32, HoleFill)> = (lo..hi)
        .map(|k| holefill_check(u, &hier, k, k + 1, &params).map(|r| (k, k + 1, r)))
        .collect::<fracmap::Result<_>>()?;
    let holefill_ok = holefill.iter().all(|(_, _, r)| r.pass);

    let grid = *u.grid();
    let phi = bump(&grid, grid.position(hier.center()), 0.5 * hier.radius(hi));
    let sides = duality_sides(
        u,
        &phi,
        &Region::Ball(&hier, hi),
        cfg.t(),
        &params,
        cfg.riesz_quadrature()?,
    )?;
    let duality_err = sides.relative_error();
    let duality_gated = grid.dim() == DUALITY_GATED_DIM;
    let duality_ok = !duality_gated || duality_err <= cfg.verify.duality_tolerance;

    let pass = el_ok && holefill_ok && duality_ok;
    let doc = json!({
        "schema_version": 1,
        "pass": pass,
        "el_residual": {
            "max_normalized": suite.max_normalized,
            "max_abs": suite.max_abs,
            "tolerance": cfg.verify.el_tolerance,
            "pass": el_ok,
        },
        "holefill": holefill.iter().map(|(k, l, r)| json!({
            "inner": k, "outer": l, "lhs": r.lhs, "rhs": r.rhs, "pass": r.pass,
        })).collect::<Vec<_>>(),
        "duality": {
            "t": cfg.t(),
            "lhs": sides.lhs,
            "rhs": sides.rhs,
            "relative_error": duality_err,
            "tolerance": cfg.verify.duality_tolerance,
            "gated": duality_gated,
            "pass": duality_ok,
        },
    });
    files.extend(w.emit(Report::ElResiduals(&suite))?);
    files.extend(w.emit(Report::Json("verify", &doc))?);
    files.push(w.finish(manifest)?);
    Ok(Outcome {
        code: if pass { ExitCode::Pass } else { ExitCode::VerifyFailed },
        summary: format!(
            "verify: {} (EL residual {:.3e}, hole filling {}, duality error {:.3e}{})",
            if pass { "pass" } else { "FAIL" },
            suite.max_normalized,
            if holefill_ok { "ok" } else { "violated" },
            duality_err,
            if duality_gated { "" } else { ", not gated" },
        ),
        files,
    })
}

/// Run the probes selected by the configuration against frozen constants.
/// Without a configuration every probe runs.
pub fn cmd_probe(opts: &CommonOpts, constants: Option<&Path>) -> Outcome {
    let cfg = if opts.config.is_some() {
        match load(opts) {
            Ok(c) => Some(c),
            Err(o) => return o,
        }
    } else {
        None
    };
    if let Some(c) = cfg.as_ref().and_then(|c| c.commutator) {
        if c != CommutatorExponents::STANDARD {
            return Outcome::error(
                ExitCode::ConfigError,
                "no frozen constant exists for non-standard commutator exponents",
            );
        }
    }
    let frozen = match constants {
        Some(p) => match FrozenConstants::load(p) {
            Ok(c) => c,
            Err(e) => return Outcome::error(ExitCode::ConfigError, e),
        },
        None => FrozenConstants::embedded(),
    };
    let seed = opts.seed.or(cfg.as_ref().map(|c| c.seed)).unwrap_or(0);
    let names: Vec<String> = match &cfg {
        Some(c) => c.probes.clone(),
        None => PROBES.iter().map(|s| s.to_string()).collect(),
    };
    let hash = match &cfg {
        Some(c) => c.hash(),
        None => probe_run_hash(seed),
    };
    with_workers(opts.workers, || {
        let run = || -> fracmap::Result<Outcome> {
            let mut m = RunManifest::start("probe", &hash, workers(opts));
            m.derived = cfg.as_ref().and_then(|c| c.derived().ok());
            let mut w = ReportWriter::new(&out_dir(opts, cfg.as_ref()), &hash)?;
            let mut files = Vec::new();
            let mut lines = Vec::new();
            let mut all = true;
            for name in &names {
                let r = run_probe(name, seed, Some(&frozen))?;
                all &= r.pass;
                lines.push(format!(
                    "  {:12} {} worst ratio {:.4e} / C {:.4e} over {} samples",
                    r.probe,
                    if r.pass { "pass" } else { "FAIL" },
                    r.worst_ratio,
                    r.frozen_c.unwrap_or(f64::NAN),
                    r.sample_count
                ));
                files.extend(w.emit(Report::Probe(&r))?);
            }
            files.push(w.finish(m)?);
            Ok(Outcome {
                code: if all { ExitCode::Pass } else { ExitCode::VerifyFailed },
                summary: format!("probe: {}\n{}", if all { "pass" } else { "FAIL" }, lines.join("\n")),
                files,
            })
        };
        run().unwrap_or_else(runtime_failure)
    })
}

/// Decay profile and Hölder fit of a field (the configured initial map, or
/// `field` when given).
pub fn cmd_decay(opts: &CommonOpts, field: Option<&Path>) -> Outcome {
    let cfg = match load(opts) {
        Ok(c) => c,
        Err(o) => return o,
    };
    with_workers(opts.workers, || {
        let run = || -> fracmap::Result<Outcome> {
            let manifest = manifest("decay", &cfg, opts);
            let u = match field {
                Some(p) => read_field(p)?.0,
                None => project_sphere(&cfg.initial_field()?)?,
            };
            cfg.grid_spec()?.check_same(u.grid())?;
            let params = cfg.energy_params()?;
            let hier = cfg.hierarchy()?;
            let table = decay_profile(&u, &hier, &params)?;
            let holder = holder_fit(&u, &[0.25, 0.5, 0.75, 1.0])?;
            let mut w = ReportWriter::new(&out_dir(opts, Some(&cfg)), &manifest.config_hash)?;
            let mut files = w.emit(Report::Decay(&table))?;
            let doc = serde_json::to_value(&holder).expect("holder fit serialises");
            files.extend(w.emit(Report::Json("holder", &doc))?);
            files.push(w.finish(manifest)?);
            Ok(Outcome {
                code: ExitCode::Pass,
                summary: format!(
                    "decay: theta {} over levels {:?}; best Hoelder exponent {}",
                    table.theta.map_or("undefined".into(), |t| format!("{t:.4}")),
                    table.fit_levels,
                    holder.best_beta.map_or("none".into(), |b| format!("{b}")),
                ),
                files,
            })
        };
        run().unwrap_or_else(runtime_failure)
    })
}
