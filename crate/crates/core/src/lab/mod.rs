//! Numerical diagnostics for regularity statements: decay of localised
//! energies, Hölder fits, the Lagrange splitting, kernel case analysis and
//! ratio probes for functional inequalities checked against frozen
//! constants.

mod constants;
mod decay;
mod holder;
mod kernel_case;
mod lagrange;
mod probes;
mod suite;

pub use constants::{FrozenConstant, FrozenConstants, CONSTANTS_VERSION};
pub use decay::{decay_profile, DecayRow, DecayTable, MIN_DECAY_LEVELS, MIN_FIT_SITES};
pub use holder::{holder_fit, HolderFit, HolderRow, HOLDER_STABILITY_FACTOR};
pub use kernel_case::{kernel_case_check, kernel_case_sweep, CaseStats, KernelCase};
pub use lagrange::{lagrange_check, LagrangeCheck, LAGRANGE_TOL};
pub use probes::{
    band_limited_field, check_commutator_exponents, commutator_probe, sample, sobolev_degeneracy,
    sobolev_exponent, sobolev_probe, t1_bound_probe, t1_field, ProbeReport, ProbeSample,
    SobolevDegeneracy, T1_MAX_POINTS,
};
pub use suite::{
    probe_config, run_probe, run_probe_suite, CALIBRATION_SEED, KERNEL_CASE_SAMPLES, PROBES,
    SAFETY_FACTOR,
};
