//! Browser demo. Every operation returns a complete SVG document for the
//! page to drop into the DOM.

use hypertri_core::kernel::{degenerate, DegenerationPath};
use hypertri_core::render::{render_svg, RenderOptions};
use hypertri_core::surface::{build_genus2, FuchsianGroup, FundamentalDomain};
use hypertri_core::triangulation::{build_base_triangulation, GeodesicMapping};
use hypertri_core::tutte::{
    concentrated_weights, morph, solve_balanced, SolverOptions, WeightVector,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::wasm_bindgen;

const PATH_STEPS: usize = 40;
const MORPH_SPREAD: f64 = 4.0;

#[wasm_bindgen]
pub struct Demo {
    group: FuchsianGroup,
    domain: FundamentalDomain,
    base: GeodesicMapping,
    seed: u64,
    ends: Option<(GeodesicMapping, GeodesicMapping)>,
    path: Option<DegenerationPath>,
    theta: f64,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(seed: u64) -> Demo {
        let (group, domain) = build_genus2();
        let base = build_base_triangulation(&group, &domain).1;
        let theta = base.theta_min();
        Demo {
            group,
            domain,
            base,
            seed,
            ends: None,
            path: None,
            theta,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.base.complex().n_vertices()
    }

    /// Minimum angle of the mapping drawn by the last call.
    pub fn theta_min(&self) -> f64 {
        self.theta
    }

    pub fn base_svg(&mut self) -> Result<String, String> {
        let phi = self.base.clone();
        self.draw(&phi, None, None)
    }

    /// Balanced mapping whose weights at `vertex` put all but `2^-level` on
    /// the two edges of its first face.
    pub fn concentrate(&mut self, vertex: usize, level: f64) -> Result<String, String> {
        let complex = self.base.complex().clone();
        if vertex >= complex.n_vertices() {
            return Err(format!("no vertex {vertex}"));
        }
        let (_, j, k) = complex.star_faces(vertex)[0];
        let w = concentrated_weights(&complex, [vertex, j, k], (-level).exp2()).map_err(err)?;
        let phi = solve_balanced(&w, &self.base, &SolverOptions::default()).map_err(err)?;
        self.draw(&phi, Some(vertex), None)
    }

    /// Weight-space morph between two seeded random balanced mappings.
    pub fn morph(&mut self, t: f64) -> Result<String, String> {
        if !(0.0..=1.0).contains(&t) {
            return Err(format!("t={t} outside [0, 1]"));
        }
        let opts = SolverOptions::default();
        if self.ends.is_none() {
            let complex = self.base.complex().clone();
            let end = |seed| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let w = WeightVector::random(&complex, &mut rng, MORPH_SPREAD);
                solve_balanced(&w, &self.base, &opts).map_err(err)
            };
            let a = end(self.seed)?;
            let b = end(self.seed.wrapping_add(1))?;
            self.ends = Some((a, b));
        }
        let (a, b) = self.ends.as_ref().expect("set above");
        let phi = morph(a, b, t, &opts).map_err(err)?;
        self.draw(&phi, None, None)
    }

    /// One vertex slid toward the boundary of its kernel; `t` is rounded to
    /// the nearest of 40 waypoints.
    pub fn degenerate(&mut self, vertex: usize, t: f64) -> Result<String, String> {
        if !(0.0..=1.0).contains(&t) {
            return Err(format!("t={t} outside [0, 1]"));
        }
        if self.path.as_ref().map_or(true, |p| p.vertex != vertex) {
            if vertex >= self.vertex_count() {
                return Err(format!("no vertex {vertex}"));
            }
            self.path = Some(degenerate(&self.base, vertex, PATH_STEPS, self.seed).map_err(err)?);
        }
        let path = self.path.as_ref().expect("set above");
        let k = (t * PATH_STEPS as f64).round() as usize;
        let phi = path.mapping(k);
        let overlay = path.kernel.boundary.clone();
        self.draw(&phi, Some(vertex), Some(overlay))
    }
}

impl Demo {
    fn draw(
        &mut self,
        phi: &GeodesicMapping,
        highlight: Option<usize>,
        overlay: Option<Vec<hypertri_core::hypgeom::HPoint>>,
    ) -> Result<String, String> {
        self.theta = phi.theta_min();
        let opts = RenderOptions {
            size: 600,
            highlight,
            overlay,
            ..Default::default()
        };
        render_svg(phi, &self.group, &self.domain, &opts).map_err(err)
    }
}

fn err(e: hypertri_core::Error) -> String {
    e.to_string()
}
