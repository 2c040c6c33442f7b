//! Exact verification of the G₂₀-equivariant links between the Clebsch
//! cubic surface and the quintic del Pezzo surface.

pub mod census;
pub mod cyclo;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod normalizer;
pub mod picard;
pub mod projgeo;
pub mod report;

pub use error::{Error, Result};
