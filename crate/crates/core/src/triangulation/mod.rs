//! Combinatorial surfaces and geodesic mappings of them into the genus-2
//! surface, represented in the universal cover by one lifted position per
//! vertex and one deck transformation per directed edge.

mod base;
mod complex;
mod mapping;

pub use base::build_base_triangulation;
pub use complex::SimplicialSurface;
pub use mapping::{
    edge_point, jitter, mapping_distance, perturb_vertex, AngleReport, DeckLabel, GeodesicMapping,
    EDGE_SAMPLES, EMBED_ANGLE_EPS,
};
