//! Configuration, field files and report emission.

mod config;
mod field_file;
mod report;

pub use config::{
    apply_override, load_config, parse_override, probe_run_hash, CommutatorExponents, DerivedQuantities, EnergyConfig, GridConfig,
    HierarchyConfig, InitialCondition, RunConfig, VerifyConfig, CONFIG_SCHEMA_VERSION,
    DEFAULT_T_GAP,
};
pub use field_file::{
    decode_field, encode_field, read_checkpoint, read_field, write_checkpoint, write_field,
    Checkpoint, FieldHeader, FIELD_MAGIC, FIELD_SCHEMA_VERSION, MAX_HEADER_BYTES,
};
pub use report::{emit_report, fmt_f64, Report, ReportWriter, RunManifest, PREFIX_LEN, REPORT_SCHEMA_VERSION};
