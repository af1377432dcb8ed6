//! Binary field files: an 8-byte magic, a little-endian `u32` header length,
//! a JSON header, then the samples as little-endian `f64`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::energy::EnergyParams;
use crate::error::{Error, Result};
use crate::grid::{GridSpec, VectorField};

pub const FIELD_MAGIC: &[u8; 8] = b"FRACMAP\0";
pub const FIELD_SCHEMA_VERSION: u32 = 1;
/// Headers larger than this are rejected before parsing.
pub const MAX_HEADER_BYTES: usize = 1 << 20;
/// Unit-norm tolerance used for the `unit_constrained` flag.
const UNIT_FLAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub params: EnergyParams,
    pub iteration: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldHeader {
    pub schema_version: u32,
    pub grid: GridSpec,
    pub components: usize,
    pub unit_constrained: bool,
    pub sample_count: usize,
    /// SHA-256 of the sample block, hex encoded.
    pub digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint: Option<Checkpoint>,
}

fn block_bytes(field: &VectorField) -> Vec<u8> {
    field.samples().iter().flat_map(|v| v.to_le_bytes()).collect()
}

/// Serialises a field with an optional solver checkpoint.
pub fn encode_field(field: &VectorField, checkpoint: Option<Checkpoint>) -> Vec<u8> {
    let block = block_bytes(field);
    let header = FieldHeader {
        schema_version: FIELD_SCHEMA_VERSION,
        grid: *field.grid(),
        components: field.components(),
        unit_constrained: field.is_unit(UNIT_FLAG_TOL),
        sample_count: field.samples().len(),
        digest: hex::encode(Sha256::digest(&block)),
        checkpoint,
    };
    let json = serde_json::to_vec(&header).expect("header serialises");
    let mut out = Vec::with_capacity(12 + json.len() + block.len());
    out.extend_from_slice(FIELD_MAGIC);
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    out.extend_from_slice(&block);
    out
}

fn structure(msg: impl Into<String>) -> Error {
    Error::Structure(msg.into())
}

/// Parses and validates a field file image.
pub fn decode_field(bytes: &[u8]) -> Result<(VectorField, FieldHeader)> {
    if bytes.len() < 12 {
        return Err(structure(format!("{} bytes is shorter than the preamble", bytes.len())));
    }
    if &bytes[..8] != FIELD_MAGIC {
        return Err(structure("bad magic"));
    }
    let hlen = u32::from_le_bytes(bytes[8..12].try_into().expect("four bytes")) as usize;
    if hlen > MAX_HEADER_BYTES {
        return Err(structure(format!("header length {hlen} exceeds {MAX_HEADER_BYTES}")));
    }
    let rest = &bytes[12..];
    if rest.len() < hlen {
        return Err(Error::Truncated {
            expected: hlen,
            found: rest.len(),
        });
    }
    let header: FieldHeader = serde_json::from_slice(&rest[..hlen])
        .map_err(|e| structure(format!("header: {e}")))?;
    if header.schema_version != FIELD_SCHEMA_VERSION {
        return Err(structure(format!(
            "schema version {} (expected {FIELD_SCHEMA_VERSION})",
            header.schema_version
        )));
    }
    let g = header.grid;
    let grid = GridSpec::new(g.dim(), g.points_per_axis(), g.box_length())
        .map_err(|e| structure(format!("header grid: {e}")))?;
    if header.components == 0 {
        return Err(structure("zero components"));
    }
    let expected_count = grid
        .len()
        .checked_mul(header.components)
        .ok_or_else(|| structure("sample count overflows"))?;
    if header.sample_count != expected_count {
        return Err(structure(format!(
            "header declares {} samples, grid and components imply {expected_count}",
            header.sample_count
        )));
    }
    if let Some(cp) = &header.checkpoint {
        let p = cp.params;
        EnergyParams::new(p.dim(), p.s(), Some(p.p()), p.eps_reg(), p.critical_mode())
            .map_err(|e| structure(format!("checkpoint params: {e}")))?;
        if p.dim() != grid.dim() {
            return Err(structure("checkpoint dimension differs from the grid"));
        }
    }
    let block = &rest[hlen..];
    let expected_bytes = expected_count
        .checked_mul(8)
        .ok_or_else(|| structure("sample block size overflows"))?;
    if block.len() < expected_bytes {
        return Err(Error::Truncated {
            expected: expected_bytes,
            found: block.len(),
        });
    }
    if block.len() > expected_bytes {
        return Err(structure(format!(
            "sample block holds {} bytes, header implies {expected_bytes}",
            block.len()
        )));
    }
    let actual = hex::encode(Sha256::digest(block));
    if actual != header.digest {
        return Err(Error::Digest {
            expected: header.digest,
            actual,
        });
    }
    let samples = block
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("eight bytes")))
        .collect();
    let field = VectorField::new(grid, header.components, samples)?;
    if header.unit_constrained && !field.is_unit(UNIT_FLAG_TOL) {
        return Err(structure("header flags the field as unit-constrained but it is not"));
    }
    Ok((field, header))
}

pub fn write_field(path: &Path, field: &VectorField) -> Result<()> {
    std::fs::write(path, encode_field(field, None)).map_err(|e| Error::io(path, e))
}

pub fn read_field(path: &Path) -> Result<(VectorField, FieldHeader)> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_field(&bytes)
}

pub fn write_checkpoint(
    path: &Path,
    field: &VectorField,
    params: &EnergyParams,
    iteration: usize,
) -> Result<()> {
    let cp = Checkpoint {
        params: *params,
        iteration,
    };
    std::fs::write(path, encode_field(field, Some(cp))).map_err(|e| Error::io(path, e))
}

/// Reads a field that must carry a checkpoint record.
pub fn read_checkpoint(path: &Path) -> Result<(VectorField, Checkpoint)> {
    let (field, header) = read_field(path)?;
    let cp = header
        .checkpoint
        .ok_or_else(|| structure("file carries no checkpoint record"))?;
    Ok((field, cp))
}
