//! Balanced geodesic triangulations of a closed genus-2 hyperbolic surface.
//!
//! The crate builds the regular-octagon surface, a base triangulation of it,
//! and the machinery around weighted balanced embeddings: the balanced-map
//! solver, mean value weights, weight-space morphs, star kernels, Karcher
//! means and single-vertex degeneration paths.

pub mod error;
pub mod hypgeom;
pub mod io;
pub mod kernel;
pub mod render;
pub mod surface;
pub mod triangulation;
pub mod tutte;

pub use error::{Error, Result};
