//! Exact-arithmetic workbench for Lie algebra cohomology, invariant metrics
//! and double extensions, Čech and gerbe cocycles on finite nerves, discrete
//! gerbe holonomy, and Chen–Ruan cohomology of global torus quotients.

pub mod algebra_core;
pub mod cech;
pub mod cli;
pub mod error;
pub mod group;
pub mod holonomy;
pub mod io;
pub mod lie;
pub mod orbifold;

pub use error::{Error, Result};
