//! Report files. Scientific outputs are byte-reproducible; wall times and
//! timestamps only ever appear in the run manifest.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::DerivedQuantities;
use crate::error::{Error, Result};
use crate::lab::{DecayTable, ProbeReport};
use crate::solver::{ElResidualReport, SolveReport};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
/// Hex digits of the configuration hash used as a file-name prefix.
pub const PREFIX_LEN: usize = 12;

/// Round-trip formatting with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Clone, Copy)]
pub enum Report<'a> {
    Solve(&'a SolveReport),
    Decay(&'a DecayTable),
    Probe(&'a ProbeReport),
    ElResiduals(&'a ElResidualReport),
    /// Arbitrary JSON document written as `{prefix}_{name}.json`.
    Json(&'a str, &'a serde_json::Value),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub config_hash: String,
    pub artifact_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_time_secs: f64,
    pub workers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<DerivedQuantities>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn start(command: &str, config_hash: &str, workers: usize) -> Self {
        let now = unix_now();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            command: command.to_string(),
            config_hash: config_hash.to_string(),
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: now,
            finished_unix: now,
            wall_time_secs: 0.0,
            workers,
            derived: None,
            outputs: Vec::new(),
        }
    }
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

/// Writes report files named `{prefix}_{kind}.{ext}` into one directory.
#[derive(Debug, Clone)]
pub struct ReportWriter {
    dir: PathBuf,
    prefix: String,
    written: Vec<String>,
}

impl ReportWriter {
    pub fn new(dir: &Path, config_hash: &str) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let prefix: String = config_hash.chars().take(PREFIX_LEN).collect();
        if prefix.is_empty() {
            return Err(Error::Structure("empty configuration hash".into()));
        }
        Ok(Self {
            dir: dir.to_path_buf(),
            prefix,
            written: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, stem: &str, ext: &str) -> PathBuf {
        self.dir.join(format!("{}_{stem}.{ext}", self.prefix))
    }

    /// File names written so far, in order.
    pub fn written(&self) -> &[String] {
        &self.written
    }

    /// Records a file written by other means (e.g. a field file).
    pub fn record(&mut self, path: &Path) {
        if let Some(name) = path.file_name() {
            self.written.push(name.to_string_lossy().into_owned());
        }
    }

    fn put(&mut self, stem: &str, ext: &str, contents: &[u8]) -> Result<PathBuf> {
        let path = self.path_for(stem, ext);
        std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
        self.record(&path);
        Ok(path)
    }

    fn put_json<T: Serialize>(&mut self, stem: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("report serialises");
        text.push('\n');
        self.put(stem, "json", text.as_bytes())
    }

    pub fn emit(&mut self, report: Report<'_>) -> Result<Vec<PathBuf>> {
        match report {
            Report::Solve(r) => {
                let json = self.put_json("solve", r)?;
                let mut csv = String::from("iteration,energy,step,grad_norm\n");
                for (k, e) in r.energy_trace.iter().enumerate() {
                    let step = if k == 0 { String::new() } else { fmt_f64(r.step_trace[k - 1]) };
                    let _ = writeln!(
                        csv,
                        "{k},{},{step},{}",
                        fmt_f64(*e),
                        fmt_f64(r.grad_norm_trace[k])
                    );
                }
                let trace = self.put("energy_trace", "csv", csv.as_bytes())?;
                Ok(vec![json, trace])
            }
            Report::Decay(t) => {
                let mut csv = String::from("level,radius,energy,sites,in_fit,theta,fit_residual\n");
                let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
                for r in &t.rows {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{},{}",
                        r.level,
                        fmt_f64(r.radius),
                        fmt_f64(r.energy),
                        r.sites,
                        t.fit_levels.contains(&r.level),
                        opt(t.theta),
                        opt(t.fit_residual)
                    );
                }
                Ok(vec![self.put("decay", "csv", csv.as_bytes())?])
            }
            Report::Probe(r) => {
                let mut csv = String::from("sample_id,lhs,rhs,ratio\n");
                for s in &r.samples {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{}",
                        s.id,
                        fmt_f64(s.lhs),
                        fmt_f64(s.rhs),
                        fmt_f64(s.ratio)
                    );
                }
                let stem = format!("probe_{}", r.probe);
                let csv_path = self.put(&stem, "csv", csv.as_bytes())?;
                let summary = serde_json::json!({
                    "schema_version": REPORT_SCHEMA_VERSION,
                    "probe": r.probe,
                    "seed": r.seed,
                    "sample_count": r.sample_count,
                    "excluded": r.excluded,
                    "worst_ratio": r.worst_ratio,
                    "frozen_C": r.frozen_c,
                    "violations": r.violations,
                    "pass": r.pass,
                });
                let json_path = self.put_json(&stem, &summary)?;
                Ok(vec![csv_path, json_path])
            }
            Report::ElResiduals(r) => {
                let mut csv = String::from(
                    "bump,center_x0,center_x1,radius,omega_i,omega_j,sign,value,normalized\n",
                );
                for e in &r.entries {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{},{},{},{}",
                        e.bump,
                        fmt_f64(e.center[0]),
                        fmt_f64(e.center[1]),
                        fmt_f64(e.radius),
                        e.omega.0,
                        e.omega.1,
                        e.sign,
                        fmt_f64(e.value),
                        fmt_f64(e.normalized)
                    );
                }
                Ok(vec![self.put("el_residuals", "csv", csv.as_bytes())?])
            }
            Report::Json(name, value) => Ok(vec![self.put_json(name, value)?]),
        }
    }

    /// Stamps the finish time and writes `{prefix}_manifest.json`.
    pub fn finish(mut self, mut manifest: RunManifest) -> Result<PathBuf> {
        manifest.finished_unix = unix_now();
        manifest.wall_time_secs = (manifest.finished_unix - manifest.started_unix).max(0.0);
        manifest.outputs = self.written.clone();
        self.put_json("manifest", &manifest)
    }
}

/// Writes every report and the manifest; returns all paths written.
pub fn emit_report(
    out_dir: &Path,
    manifest: RunManifest,
    reports: &[Report<'_>],
) -> Result<Vec<PathBuf>> {
    let mut w = ReportWriter::new(out_dir, &manifest.config_hash)?;
    let mut paths = Vec::new();
    for r in reports {
        paths.extend(w.emit(*r)?);
    }
    paths.push(w.finish(manifest)?);
    Ok(paths)
}
