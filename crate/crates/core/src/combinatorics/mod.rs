//! Triple systems and tight frames, and the cubic forms they carry.

mod frames;
mod triple_systems;

pub use frames::{
    frame_catalog, frame_catalog_names, frame_polynomial, golden, group_orbit_frame, icosahedral_generators,
    simplicial_frame, validate_frame, Frame, FrameReport, DISTANCE_CLUSTER_TOL,
};
pub use triple_systems::{
    pfaffian_triple_system, projective_geometry, triple_system_polynomial, ts_catalog, ts_catalog_names,
    validate_triple_system, TripleSystem, TripleSystemReport,
};
