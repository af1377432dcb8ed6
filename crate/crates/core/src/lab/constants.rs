use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Constants shipped with the library.
const EMBEDDED: &str = include_str!("../../data/frozen_constants.json");
pub const CONSTANTS_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrozenConstant {
    pub value: f64,
    /// Worst ratio observed during calibration.
    pub calibration_worst: f64,
    pub config: String,
}

#[derive(Serialize)]
struct Body<'a> {
    version: u32,
    safety_factor: f64,
    calibration_seed: u64,
    constants: &'a BTreeMap<String, FrozenConstant>,
}

/// Versioned probe constants with a SHA-256 digest over their canonical
/// JSON form, so that hand edits are detected on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrozenConstants {
    pub version: u32,
    pub safety_factor: f64,
    pub calibration_seed: u64,
    pub constants: BTreeMap<String, FrozenConstant>,
    pub digest: String,
}

impl FrozenConstants {
    pub fn new(
        safety_factor: f64,
        calibration_seed: u64,
        constants: BTreeMap<String, FrozenConstant>,
    ) -> Self {
        let mut out = Self {
            version: CONSTANTS_VERSION,
            safety_factor,
            calibration_seed,
            constants,
            digest: String::new(),
        };
        out.digest = out.compute_digest();
        out
    }

    fn compute_digest(&self) -> String {
        let body = Body {
            version: self.version,
            safety_factor: self.safety_factor,
            calibration_seed: self.calibration_seed,
            constants: &self.constants,
        };
        let bytes = serde_json::to_vec(&body).expect("constants serialise");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: Self =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("constants file: {e}")))?;
        if parsed.version != CONSTANTS_VERSION {
            return Err(Error::Parse(format!(
                "constants file version {} (expected {CONSTANTS_VERSION})",
                parsed.version
            )));
        }
        let actual = parsed.compute_digest();
        if actual != parsed.digest {
            return Err(Error::Digest {
                expected: parsed.digest,
                actual,
            });
        }
        Ok(parsed)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn embedded() -> Self {
        Self::from_json(EMBEDDED).expect("embedded constants file is valid")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("constants serialise") + "\n"
    }

    pub fn get(&self, probe: &str) -> Result<f64> {
        self.constants
            .get(probe)
            .map(|c| c.value)
            .ok_or_else(|| Error::Config {
                key: format!("constants.{probe}"),
                msg: "no frozen constant for this probe".into(),
            })
    }
}
