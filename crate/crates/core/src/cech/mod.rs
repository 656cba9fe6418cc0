//! Čech cochains on finite nerves: abelian cohomology, the twisted
//! 2-cocycle law for gerbes, induced cocycles and lifting obstructions.

mod abelian;
mod nerve;
mod nonabelian;

pub use abelian::{
    are_cohomologous, coboundary, cohomology, is_coboundary, twist_by_coboundary, AbelianCoefficients, Cochain,
    CohomologyGroup,
};
pub use nerve::Nerve;
pub use nonabelian::{
    induced_cocycle, lifting_obstruction, lifting_obstruction_twisted, nonabelian_2cocycle_check, trivial_band,
    CocycleReport, GroupCochain, GroupExtensionData,
};
