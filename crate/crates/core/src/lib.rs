//! Exact non-paraxial vortex beams for photons, relativistic electrons and
//! gravitational waves, built from scalar generating potentials, together
//! with fringe-visibility analysis, grid export and identity checks.

pub mod analysis;
pub mod electron;
pub mod error;
mod exec;
pub mod grid;
pub mod gw;
pub mod jet;
pub mod photon;
pub mod potentials;
pub mod presets;
pub mod units;
pub mod validation;

pub use error::{Error, Result};
