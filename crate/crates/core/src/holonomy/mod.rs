//! Discrete abelian gerbe data on triangulated surfaces, matrix-valued
//! constant connective data, and the cocycles of 2-sequences. Values in
//! `U(1)` are exact rationals mod 1, written additively.

mod defect;
mod sequences;
mod surface;

pub use defect::{
    connective_consistency, curvature_defect, curvature_defect_abelian, scalars_to_cochain, ConnectiveReport,
    CurvatureDefect, TriangleResidual,
};
pub use sequences::{two_sequence_3cocycle, two_sequence_4cocycle, FourCocycle, ThreeCocycle};
pub use surface::{
    holonomy_cocycle, surface_holonomy, surface_holonomy_of, HolonomyCocycle, OrientedSurfaceTriangulation,
};
