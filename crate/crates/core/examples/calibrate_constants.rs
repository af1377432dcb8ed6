//! Regenerates `data/frozen_constants.json`: runs every standard probe at
//! the calibration seed and freezes `SAFETY_FACTOR` times the worst ratio.
//!
//! Usage: cargo run --release --example calibrate_constants [-- OUTPUT]

use std::collections::BTreeMap;

use fracmap::lab::{
    probe_config, run_probe, FrozenConstant, FrozenConstants, CALIBRATION_SEED, PROBES,
    SAFETY_FACTOR,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/frozen_constants.json").into());
    let mut constants = BTreeMap::new();
    for name in PROBES {
        let report = run_probe(name, CALIBRATION_SEED, None)?;
        // Hole filling is an exact inequality with constant one.
        let value = if name == "holefill" {
            1.0
        } else {
            SAFETY_FACTOR * report.worst_ratio
        };
        println!("{name:12} worst ratio {:.6e} -> C = {value:.6e}", report.worst_ratio);
        constants.insert(
            name.to_string(),
            FrozenConstant {
                value,
                calibration_worst: report.worst_ratio,
                config: probe_config(name)?.to_string(),
            },
        );
    }
    let file = FrozenConstants::new(SAFETY_FACTOR, CALIBRATION_SEED, constants);
    std::fs::write(&out, file.to_json())?;
    println!("wrote {out}");
    Ok(())
}
