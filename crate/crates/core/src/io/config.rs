//! Strict JSON run configuration with dotted-key overrides and a canonical
//! digest.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::energy::{EnergyParams, RieszQuadrature};
use crate::error::{Error, Result};
use crate::grid::{make_grid, BallHierarchy, GridSpec, VectorField};
use crate::lab::{check_commutator_exponents, sobolev_exponent, PROBES};
use crate::solver::SolverConfig;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;
/// Distance below `s` of the default order `t`.
pub const DEFAULT_T_GAP: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub points_per_axis: usize,
    #[serde(default = "default_box_length")]
    pub box_length: f64,
}

fn default_box_length() -> f64 {
    2.0 * std::f64::consts::PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyConfig {
    pub s: f64,
    /// Filled with `n / s` when omitted.
    #[serde(default)]
    pub p: Option<f64>,
    /// Order of the Riesz potential in the duality check; defaults to
    /// `s - 0.05`.
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub eps_reg: f64,
    #[serde(default)]
    pub critical_mode: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HierarchyConfig {
    /// Grid coordinates of the centre; defaults to the middle of the box.
    #[serde(default)]
    pub center: Option<[usize; 2]>,
    pub base_radius: f64,
    #[serde(default)]
    pub level_min: i32,
    pub level_max: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `N = 2`: angle `2π d x_0 / L + a Σ_i sin(2π x_i / L)`.
    Winding {
        #[serde(default = "one")]
        degree: i64,
        #[serde(default)]
        perturbation: f64,
    },
    Constant { value: Vec<f64> },
    /// Independent uniform directions, seeded by the run seed.
    Random { components: usize },
    /// Field file written by an earlier run.
    File { path: PathBuf },
}

fn one() -> i64 {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub basis_size: usize,
    /// Bound on the normalised Euler–Lagrange residual.
    pub el_tolerance: f64,
    /// Bound on the relative duality discrepancy.
    pub duality_tolerance: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            basis_size: 8,
            el_tolerance: 1e-6,
            duality_tolerance: 1e-2,
        }
    }
}

/// Exponents of the commutator probe; must satisfy
/// `1/p = 1/p1 + 1/p2 - (alpha - eps)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommutatorExponents {
    pub alpha: f64,
    pub eps: f64,
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
}

impl CommutatorExponents {
    /// The configuration the shipped constant was calibrated for.
    pub const STANDARD: Self = Self {
        alpha: 0.5,
        eps: 0.25,
        p: 4.0,
        p1: 4.0,
        p2: 4.0,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub grid: GridConfig,
    pub energy: EnergyConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    pub hierarchy: HierarchyConfig,
    pub initial: InitialCondition,
    #[serde(default)]
    pub verify: VerifyConfig,
    /// Probe names; empty selects none.
    #[serde(default)]
    pub probes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutator: Option<CommutatorExponents>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Quantities derived from a validated configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    pub spacing: f64,
    pub p: f64,
    pub critical_p: f64,
    pub t: f64,
    pub t_lower_bound: f64,
    /// `np / (n - (s - t) p)` when defined.
    pub sobolev_exponent: Option<f64>,
    pub level_radii: Vec<(i32, f64)>,
}

fn config_err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        msg: msg.into(),
    }
}

fn keyed(key: &str, e: Error) -> Error {
    match e {
        Error::Config { .. } => e,
        other => config_err(key, other.to_string()),
    }
}

impl RunConfig {
    /// Parses JSON text, applies `key=value` overrides and validates.
    pub fn from_json_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut value: Value =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        for o in overrides {
            let (path, v) = parse_override(o)?;
            apply_override(&mut value, &path, v)?;
        }
        let cfg: RunConfig =
            serde_json::from_value(value).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.resolved()
    }

    /// Fills defaults (`p`, `t`) and checks every constraint.
    pub fn resolved(mut self) -> Result<Self> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(config_err(
                "schema_version",
                format!("expected {CONFIG_SCHEMA_VERSION}, found {}", self.schema_version),
            ));
        }
        let grid = self.grid_spec()?;
        let n = grid.dim();
        let e = self.energy;
        let params = EnergyParams::new(n, e.s, e.p, e.eps_reg, e.critical_mode)
            .map_err(|err| keyed("energy", err))?;
        self.energy.p = Some(params.p());
        let t = e.t.unwrap_or(e.s - DEFAULT_T_GAP);
        if !(t > 0.0 && t < 1.0) {
            return Err(config_err("energy.t", format!("t = {t} must lie in (0, 1)")));
        }
        let bound = params.t_lower_bound();
        if t <= bound {
            return Err(config_err(
                "energy.t",
                format!("t = {t} violates t > 1 - (1 - s) p = {bound}"),
            ));
        }
        self.energy.t = Some(t);
        self.solver.validate().map_err(|err| keyed("solver", err))?;
        let hier = self.hierarchy()?;
        let (lo, hi) = hier.level_range();
        for level in lo..=hi {
            hier.check_ball(level).map_err(|err| keyed("hierarchy", err))?;
        }
        for name in &self.probes {
            if !PROBES.contains(&name.as_str()) {
                return Err(config_err(
                    "probes",
                    format!("unknown probe `{name}` (known: {})", PROBES.join(", ")),
                ));
            }
        }
        if let Some(c) = self.commutator {
            check_commutator_exponents(1, c.alpha, c.eps, c.p, c.p1, c.p2)
                .map_err(|err| keyed("commutator", err))?;
        }
        let v = self.verify;
        if v.basis_size == 0 || !(v.el_tolerance > 0.0) || !(v.duality_tolerance > 0.0) {
            return Err(config_err("verify", "basis_size and tolerances must be positive"));
        }
        match &self.initial {
            InitialCondition::Winding { perturbation, .. } if !perturbation.is_finite() => {
                return Err(config_err("initial.perturbation", "must be finite"));
            }
            InitialCondition::Constant { value } if value.len() < 2 => {
                return Err(config_err("initial.value", "needs at least two components"));
            }
            InitialCondition::Random { components } if *components < 2 => {
                return Err(config_err("initial.components", "needs at least two components"));
            }
            _ => {}
        }
        Ok(self)
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        let g = self.grid;
        make_grid(g.dim, g.points_per_axis, g.box_length).map_err(|e| keyed("grid", e))
    }

    pub fn energy_params(&self) -> Result<EnergyParams> {
        let e = self.energy;
        EnergyParams::new(self.grid.dim, e.s, e.p, e.eps_reg, e.critical_mode)
            .map_err(|err| keyed("energy", err))
    }

    /// Riesz order, after [`RunConfig::resolved`].
    pub fn t(&self) -> f64 {
        self.energy.t.unwrap_or(self.energy.s - DEFAULT_T_GAP)
    }

    pub fn riesz_quadrature(&self) -> Result<RieszQuadrature> {
        Ok(RieszQuadrature::default_for(&self.grid_spec()?))
    }

    pub fn hierarchy(&self) -> Result<BallHierarchy> {
        let grid = self.grid_spec()?;
        let h = self.hierarchy;
        let m = grid.points_per_axis();
        let c = h.center.unwrap_or([m / 2, m / 2]);
        if c[0] >= m || c[1] >= m {
            return Err(config_err("hierarchy.center", format!("{c:?} outside the grid")));
        }
        BallHierarchy::new(grid, grid.site(c), h.base_radius, h.level_min, h.level_max)
            .map_err(|e| keyed("hierarchy", e))
    }

    /// Initial map (not yet projected to the sphere).
    pub fn initial_field(&self) -> Result<VectorField> {
        let grid = self.grid_spec()?;
        let l = grid.box_length();
        let w = 2.0 * std::f64::consts::PI / l;
        match &self.initial {
            InitialCondition::Winding {
                degree,
                perturbation,
            } => {
                let (d, a, dim) = (*degree as f64, *perturbation, grid.dim());
                Ok(VectorField::from_fn(grid, 2, |p, out| {
                    let mut th = w * d * p[0];
                    for x in &p[..dim] {
                        th += a * (w * x).sin();
                    }
                    out[0] = th.cos();
                    out[1] = th.sin();
                }))
            }
            InitialCondition::Constant { value } => Ok(VectorField::constant(grid, value)),
            InitialCondition::Random { components } => {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.seed);
                let mut u = VectorField::zeros(grid, *components);
                for v in u.samples_mut() {
                    *v = rng.gen_range(-1.0..1.0);
                }
                Ok(u)
            }
            InitialCondition::File { path } => {
                let (u, _) = super::read_field(path)?;
                grid.check_same(u.grid())
                    .map_err(|e| keyed("initial.path", e))?;
                Ok(u)
            }
        }
    }

    pub fn derived(&self) -> Result<DerivedQuantities> {
        let grid = self.grid_spec()?;
        let params = self.energy_params()?;
        let hier = self.hierarchy()?;
        let (lo, hi) = hier.level_range();
        let t = self.t();
        Ok(DerivedQuantities {
            spacing: grid.spacing(),
            p: params.p(),
            critical_p: grid.dim() as f64 / params.s(),
            t,
            t_lower_bound: params.t_lower_bound(),
            sobolev_exponent: sobolev_exponent(grid.dim(), params.s(), t, params.p()).ok(),
            level_radii: (lo..=hi).map(|l| (l, hier.radius(l))).collect(),
        })
    }

    /// Canonical JSON (sorted keys, output directory removed).
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serialises");
        if let Value::Object(map) = &mut v {
            map.remove("output_dir");
        }
        serde_json::to_string(&v).expect("value serialises")
    }

    /// SHA-256 of [`RunConfig::canonical_json`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}

/// Hash identifying a probe run that has no configuration file.
pub fn probe_run_hash(seed: u64) -> String {
    let body = serde_json::json!({"command": "probe", "seed": seed});
    hex::encode(Sha256::digest(body.to_string().as_bytes()))
}

/// Reads, overrides and validates a configuration file.
pub fn load_config(path: &Path, overrides: &[String]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    RunConfig::from_json_str(&text, overrides)
}

/// Splits `a.b.c=value` into its key path and a JSON value. Values that do
/// not parse as JSON are taken as strings.
pub fn parse_override(text: &str) -> Result<(Vec<String>, Value)> {
    let (key, raw) = text
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("override `{text}` is not key=value")))?;
    let key = key.trim();
    let path: Vec<String> = key.split('.').map(str::to_string).collect();
    if path.iter().any(|p| p.is_empty() || p.chars().any(char::is_whitespace)) {
        return Err(Error::Parse(format!("override key `{key}` is malformed")));
    }
    let raw = raw.trim();
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((path, value))
}

/// Sets `path` inside `root`, creating intermediate objects.
pub fn apply_override(root: &mut Value, path: &[String], value: Value) -> Result<()> {
    let (last, parents) = path
        .split_last()
        .ok_or_else(|| Error::Parse("empty override key".into()))?;
    let mut node = root;
    for (depth, key) in parents.iter().enumerate() {
        let Value::Object(map) = node else {
            return Err(config_err(
                &path[..depth].join("."),
                "override descends into a non-object value",
            ));
        };
        node = map
            .entry(key.clone())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    match node {
        Value::Object(map) => {
            map.insert(last.clone(), value);
            Ok(())
        }
        _ => Err(config_err(
            &parents.join("."),
            "override descends into a non-object value",
        )),
    }
}
