//! Invariants and structure tests for cubic forms.

mod critical;
mod invariants;
mod nonassoc;
mod structure;

pub use critical::{
    critical_lines, critical_lines_with_stability, extreme_set, extreme_set_from, mkc, mkc_from, sphere_points,
    CritOptions, CriticalLine, CriticalLineSet, DEFAULT_SEED,
};
pub use invariants::{
    classify_low_dim, coefficient_residuals, compare, fingerprint, first_difference, Classification, Fingerprint,
    Verdict, WeightClass, CASS_ZERO, COMPARE_TOL,
};
pub use nonassoc::{ass_tensor, cass_norm, cass_tensor, Tensor4, RANK4_MAX_DIM};
pub use structure::{decomposability_witness, reflection_automorphism, DEFAULT_WITNESS_TOL};
