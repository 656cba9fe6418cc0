//! Finite-group orbifold data: chart compatibility and Chen–Ruan
//! cohomology of global torus quotients.

mod atlas;
mod toral;

pub use atlas::{atlas_check, AtlasReport, AtlasViolation, ChartAtlas};
pub use toral::{
    ComplexMatrix, CrCohomology, DegreeShift, FixedLocus, SectorReport, SectorSymmetry, ToralAction,
    DEFAULT_EIGENVALUE_TOLERANCE, MAX_ENUMERATED_COMPONENTS, REPRESENTATION_TOLERANCE,
};
