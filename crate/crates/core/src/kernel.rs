//! Star polygons, kernels, Karcher means and the degenerating vertex path.
//!
//! The kernel of a star polygon is the intersection of the inward
//! half-planes bounded by the complete geodesics through its boundary edges.
//! Moving the center vertex anywhere inside the kernel keeps the star
//! embedded; pushing it radially from the kernel's Karcher mean to the
//! kernel boundary collapses a triangle.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypgeom::{
    dist, exp_map, geodesic_eval, log_map, mdot, HIsometry, HPoint, HTangent, OrientedGeodesic,
    DEGENERATE_LENGTH,
};
use crate::triangulation::GeodesicMapping;
use crate::tutte::{mean_value_weights, normalize};

/// Side tolerance for kernel membership.
pub const KERNEL_SLACK: f64 = 1e-10;
/// Sub-triangles per fan-triangle edge in the Karcher quadrature.
pub const KARCHER_SUBDIVISION: usize = 8;
pub const KARCHER_TOL: f64 = 1e-8;
const KARCHER_MAX_ITERS: usize = 1000;
const CLIP_EPS: f64 = 1e-13;
const PERTURB_NORM: f64 = 1e-6;
const COINCIDE: f64 = 1e-8;

/// The lifted closed star of a vertex.
#[derive(Clone, Debug)]
pub struct StarPolygon {
    pub vertex: usize,
    pub center: HPoint,
    /// Link vertices in counter-clockwise order.
    pub link: Vec<usize>,
    pub boundary: Vec<HPoint>,
    pub spokes: Vec<HTangent>,
}

impl StarPolygon {
    /// Sum of the star's triangle areas.
    pub fn area(&self) -> f64 {
        let n = self.boundary.len();
        (0..n)
            .map(|k| {
                crate::hypgeom::triangle_area(
                    &self.center,
                    &self.boundary[k],
                    &self.boundary[(k + 1) % n],
                )
            })
            .sum()
    }

    pub fn edge_geodesics(&self) -> Vec<OrientedGeodesic> {
        let n = self.boundary.len();
        (0..n)
            .filter_map(|k| {
                OrientedGeodesic::through(&self.boundary[k], &self.boundary[(k + 1) % n])
            })
            .collect()
    }
}

pub fn star_polygon(phi: &GeodesicMapping, v: usize) -> Result<StarPolygon> {
    let complex = phi.complex();
    let ring = complex.ring(v);
    let spokes: Vec<HTangent> = ring.iter().map(|&d| phi.edge_vector(d)).collect();
    let n = ring.len();
    let mut total = 0.0;
    for k in 0..n {
        let a = spokes[k].signed_angle_to(&spokes[(k + 1) % n]);
        if !(a > 0.0 && a < std::f64::consts::PI) || spokes[k].norm() <= DEGENERATE_LENGTH {
            return Err(Error::StarNotEmbedded(v));
        }
        total += a;
    }
    if (total - 2.0 * std::f64::consts::PI).abs() > 1e-6 {
        return Err(Error::StarNotEmbedded(v));
    }
    Ok(StarPolygon {
        vertex: v,
        center: *phi.lift(v),
        link: ring.iter().map(|&d| complex.directed(d).1).collect(),
        boundary: ring.iter().map(|&d| phi.head_position(d)).collect(),
        spokes,
    })
}

/// A compact convex polygon given by half-planes and its vertices.
#[derive(Clone, Debug)]
pub struct ConvexDisk {
    pub halfplanes: Vec<OrientedGeodesic>,
    /// Vertices in counter-clockwise order.
    pub boundary: Vec<HPoint>,
}

impl ConvexDisk {
    pub fn contains(&self, x: &HPoint, slack: f64) -> bool {
        self.halfplanes.iter().all(|h| h.side(x) <= slack)
    }

    /// Strictly inside every half-plane by more than `margin`.
    pub fn is_interior(&self, x: &HPoint, margin: f64) -> bool {
        self.halfplanes.iter().all(|h| h.side(x) < -margin)
    }

    /// `|max_k <z, u_k>|`; zero exactly on the boundary.
    pub fn boundary_residual(&self, z: &HPoint) -> f64 {
        self.halfplanes
            .iter()
            .map(|h| h.side(z))
            .fold(f64::NEG_INFINITY, f64::max)
            .abs()
    }

    pub fn area(&self) -> f64 {
        let b = &self.boundary;
        (1..b.len() - 1)
            .map(|k| crate::hypgeom::triangle_area(&b[0], &b[k], &b[k + 1]))
            .sum()
    }

    /// Klein-model centroid of the vertices; strictly interior for a
    /// polygon with nonempty interior.
    pub fn witness(&self) -> HPoint {
        HPoint::centroid(self.boundary.iter()).expect("polygon vertices are timelike")
    }

    /// Sampled convexity check: geodesics between vertex pairs stay inside.
    pub fn is_convex(&self, samples: usize) -> bool {
        let b = &self.boundary;
        b.iter().all(|p| {
            b.iter().all(|q| {
                (1..samples).all(|s| {
                    let x = geodesic_eval(p, q, s as f64 / samples as f64);
                    self.contains(&x, 1e-9)
                })
            })
        })
    }

    pub fn transform(&self, g: &HIsometry) -> ConvexDisk {
        ConvexDisk {
            halfplanes: self
                .halfplanes
                .iter()
                .map(|h| g.apply_geodesic(h))
                .collect(),
            boundary: self.boundary.iter().map(|p| g.apply(p)).collect(),
        }
    }

    /// Intersection with one more half-plane.
    pub fn clip(&self, h: &OrientedGeodesic) -> Result<ConvexDisk> {
        let mut halfplanes = self.halfplanes.clone();
        halfplanes.push(*h);
        let frame = HIsometry::boost_to(&self.witness());
        let poly = self
            .boundary
            .iter()
            .map(|p| klein(&frame.inverse().apply(p)))
            .collect();
        let local = frame.inverse().apply_geodesic(h);
        finish(halfplanes, clip_polygon(poly, &local), &frame)
    }

    /// Regular polygon with `k` vertices at distance `r` from `center`,
    /// the first at direction angle `phase`.
    pub fn regular(center: &HPoint, k: usize, r: f64, phase: f64) -> ConvexDisk {
        let g = HIsometry::boost_to(center);
        let boundary: Vec<HPoint> = (0..k)
            .map(|i| {
                g.apply(&HPoint::polar(
                    r,
                    phase + 2.0 * std::f64::consts::PI * i as f64 / k as f64,
                ))
            })
            .collect();
        let halfplanes = (0..k)
            .map(|i| {
                OrientedGeodesic::through(&boundary[i], &boundary[(i + 1) % k]).expect("distinct")
            })
            .collect();
        ConvexDisk {
            halfplanes,
            boundary,
        }
    }
}

fn klein(p: &HPoint) -> Vector3<f64> {
    p.coords() / p.coords()[0]
}

/// Sutherland-Hodgman in Klein coordinates (`x0 = 1`), keeping `<x,u> <= 0`.
fn clip_polygon(poly: Vec<Vector3<f64>>, h: &OrientedGeodesic) -> Vec<Vector3<f64>> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let sa = mdot(&a, &h.normal);
        let sb = mdot(&b, &h.normal);
        let a_in = sa <= CLIP_EPS;
        let b_in = sb <= CLIP_EPS;
        if a_in {
            out.push(a);
        }
        if a_in != b_in && (sa - sb).abs() > 0.0 {
            let t = sa / (sa - sb);
            if t > 0.0 && t < 1.0 {
                out.push(a + (b - a) * t);
            }
        }
    }
    out
}

fn finish(
    halfplanes: Vec<OrientedGeodesic>,
    poly: Vec<Vector3<f64>>,
    frame: &HIsometry,
) -> Result<ConvexDisk> {
    let mut boundary: Vec<HPoint> = Vec::with_capacity(poly.len());
    for v in poly {
        let p = HPoint::normalize_timelike(&v).ok_or(Error::EmptyKernel)?;
        let p = frame.apply(&p);
        if boundary.last().map_or(true, |q| dist(q, &p) > 1e-12) {
            boundary.push(p);
        }
    }
    while boundary.len() > 1 && dist(&boundary[0], boundary.last().unwrap()) <= 1e-12 {
        boundary.pop();
    }
    if boundary.len() < 3 {
        return Err(Error::EmptyKernel);
    }
    let disk = ConvexDisk {
        halfplanes,
        boundary,
    };
    if !(disk.area() > 1e-14) {
        return Err(Error::EmptyKernel);
    }
    Ok(disk)
}

/// Kernel of a star polygon: intersection of the inward half-planes of its
/// boundary edges, clipped from a large square in the center's Klein frame.
pub fn compute_kernel(star: &StarPolygon) -> Result<ConvexDisk> {
    let frame = HIsometry::boost_to(&star.center);
    let to_local = frame.inverse();
    let halfplanes = star.edge_geodesics();
    // corners outside the disk are fine in homogeneous coordinates
    let mut poly = vec![
        Vector3::new(1.0, -2.0, -2.0),
        Vector3::new(1.0, 2.0, -2.0),
        Vector3::new(1.0, 2.0, 2.0),
        Vector3::new(1.0, -2.0, 2.0),
    ];
    for h in &halfplanes {
        poly = clip_polygon(poly, &to_local.apply_geodesic(h));
    }
    finish(halfplanes, poly, &frame)
}

/// Degree-5 seven-point rule on the reference triangle: barycentric
/// coordinates and weights summing to 1.
fn dunavant7() -> [([f64; 3], f64); 7] {
    let s = 15f64.sqrt();
    let (a1, b1, w1) = (
        (9.0 - 2.0 * s) / 21.0,
        (6.0 + s) / 21.0,
        (155.0 + s) / 1200.0,
    );
    let (a2, b2, w2) = (
        (9.0 + 2.0 * s) / 21.0,
        (6.0 - s) / 21.0,
        (155.0 - s) / 1200.0,
    );
    let c = 1.0 / 3.0;
    [
        ([c, c, c], 0.225),
        ([a1, b1, b1], w1),
        ([b1, a1, b1], w1),
        ([b1, b1, a1], w1),
        ([a2, b2, b2], w2),
        ([b2, a2, b2], w2),
        ([b2, b2, a2], w2),
    ]
}

/// Area quadrature nodes over a convex disk.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub nodes: Vec<(HPoint, f64)>,
}

impl Quadrature {
    /// Fan triangulation from the first boundary vertex; each fan triangle
    /// is cut into `m * m` pieces in Klein barycentric coordinates and each
    /// piece integrated with the seven-point rule, including the Jacobian of
    /// the central projection onto the hyperboloid.
    pub fn new(d: &ConvexDisk, m: usize) -> Self {
        let rule = dunavant7();
        let b = &d.boundary;
        let mut nodes = Vec::new();
        let h = 1.0 / m as f64;
        for k in 1..b.len() - 1 {
            let p = [*b[0].coords(), *b[k].coords(), *b[k + 1].coords()];
            let at = |i: usize, j: usize| {
                let (x, y) = (i as f64 * h, j as f64 * h);
                let v = p[0] * (1.0 - x - y) + p[1] * x + p[2] * y;
                v / (-mdot(&v, &v)).sqrt()
            };
            // each piece is integrated over its own chord triangle, spanned
            // by points on the hyperboloid, so the Jacobian stays near 1
            let mut sub = |t: [Vector3<f64>; 3]| {
                let det = t[0].dot(&t[1].cross(&t[2])).abs();
                for (bc, w) in &rule {
                    let y = t[0] * bc[0] + t[1] * bc[1] + t[2] * bc[2];
                    let rho = (-mdot(&y, &y)).sqrt();
                    // the reference triangle has area 1/2
                    nodes.push((HPoint::project(y / rho), 0.5 * w * det / (rho * rho * rho)));
                }
            };
            for i in 0..m {
                for j in 0..m - i {
                    sub([at(i, j), at(i + 1, j), at(i, j + 1)]);
                    if i + j + 1 < m {
                        sub([at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)]);
                    }
                }
            }
        }
        Quadrature { nodes }
    }

    pub fn area(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }

    /// `E(x) = integral of d(x, y)^2 dA(y)`.
    pub fn energy(&self, x: &HPoint) -> f64 {
        self.nodes.iter().map(|(y, w)| w * dist(x, y).powi(2)).sum()
    }

    /// `integral of log_x(y) dA(y)`, which is `-grad E / 2`.
    pub fn mean_field(&self, x: &HPoint) -> HTangent {
        self.nodes.iter().fold(HTangent::zero(*x), |acc, (y, w)| {
            acc.add(&log_map(x, y).scale(*w))
        })
    }

    pub fn gradient(&self, x: &HPoint) -> HTangent {
        self.mean_field(x).scale(-2.0)
    }
}

/// Karcher mean of `d` under [`Quadrature`] with [`KARCHER_SUBDIVISION`].
pub fn karcher_mean(d: &ConvexDisk, tol: f64) -> Result<HPoint> {
    karcher_mean_with(&Quadrature::new(d, KARCHER_SUBDIVISION), &d.witness(), tol)
}

/// Riemannian center-of-mass iteration `x <- exp_x(kappa F(x) / area)`,
/// with `kappa` halving from 1 until the energy decreases.
pub fn karcher_mean_with(q: &Quadrature, start: &HPoint, tol: f64) -> Result<HPoint> {
    let area = q.area();
    let mut x = *start;
    let mut e = q.energy(&x);
    let mut field = q.mean_field(&x);
    for _ in 0..KARCHER_MAX_ITERS {
        let grad = field.norm();
        if grad < tol {
            return Ok(x);
        }
        let mut kappa = 1.0;
        loop {
            let trial = exp_map(&field.scale(kappa / area));
            let e_trial = q.energy(&trial);
            let f_trial = q.mean_field(&trial);
            // near the minimum energy differences fall below rounding;
            // a smaller field then decides
            if e_trial < e || (e_trial <= e * (1.0 + 1e-14) && f_trial.norm() < grad) {
                x = trial;
                e = e_trial;
                field = f_trial;
                break;
            }
            kappa *= 0.5;
            if kappa < 1e-12 {
                return Err(Error::KarcherStalled { grad });
            }
        }
    }
    Err(Error::KarcherStalled { grad: field.norm() })
}

/// Point where the geodesic ray from interior `x` through `y` leaves `d`.
pub fn radial_project(d: &ConvexDisk, x: &HPoint, y: &HPoint) -> Result<HPoint> {
    if !d.is_interior(x, 0.0) {
        return Err(Error::NotInterior);
    }
    if !d.contains(y, KERNEL_SLACK) {
        return Err(Error::OutsideKernel);
    }
    let v = log_map(x, y);
    let len = v.norm();
    if len <= 1e-12 {
        return Err(Error::ProjectionAtCenter);
    }
    let w = v.scale(1.0 / len);
    // <x cosh t + w sinh t, u> = 0  <=>  tanh t = -<x,u> / <w,u>
    let t = d
        .halfplanes
        .iter()
        .filter_map(|h| {
            let a = h.side(x);
            let b = mdot(&w.vec, &h.normal);
            let r = -a / b;
            (b > 0.0 && r < 1.0).then(|| r.atanh())
        })
        .fold(f64::INFINITY, f64::min);
    if !t.is_finite() {
        return Err(Error::EmptyKernel);
    }
    Ok(exp_map(&w.scale(t)))
}

/// `sinh` of the distance from `y` to the geodesic through `x` and `z`.
pub fn collinearity_residual(x: &HPoint, y: &HPoint, z: &HPoint) -> f64 {
    OrientedGeodesic::through(x, z).map_or(0.0, |g| g.side(y).abs())
}

fn segment_distance(p: &HPoint, a: &HPoint, b: &HPoint) -> f64 {
    let ends = dist(p, a).min(dist(p, b));
    let Some(g) = OrientedGeodesic::through(a, b) else {
        return ends;
    };
    let f = g.foot(p);
    if dist(a, &f) + dist(&f, b) <= dist(a, b) + 1e-12 {
        dist(p, &f)
    } else {
        ends
    }
}

/// Sampled Hausdorff distance between two closed geodesic polylines.
pub fn hausdorff(a: &[HPoint], b: &[HPoint]) -> f64 {
    let one_way = |a: &[HPoint], b: &[HPoint]| {
        let n = a.len();
        let m = b.len();
        (0..n)
            .flat_map(|k| (0..32).map(move |s| (k, s as f64 / 32.0)))
            .map(|(k, t)| {
                let p = geodesic_eval(&a[k], &a[(k + 1) % n], t);
                (0..m)
                    .map(|l| segment_distance(&p, &b[l], &b[(l + 1) % m]))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// The mapping with `v` moved to `x`, which must lie in the kernel of the
/// star of `v`.
pub fn move_vertex(phi: &GeodesicMapping, v: usize, x: &HPoint) -> Result<GeodesicMapping> {
    let kernel = compute_kernel(&star_polygon(phi, v)?)?;
    move_vertex_in(phi, v, &kernel, x)
}

fn move_vertex_in(
    phi: &GeodesicMapping,
    v: usize,
    kernel: &ConvexDisk,
    x: &HPoint,
) -> Result<GeodesicMapping> {
    if !kernel.contains(x, KERNEL_SLACK) {
        return Err(Error::OutsideKernel);
    }
    Ok(phi.with_lift(v, *x))
}

#[derive(Clone, Debug)]
pub struct Waypoint {
    pub t: f64,
    pub lift: HPoint,
    pub theta_min: f64,
}

/// Straight-line path of one vertex from its position to the kernel
/// boundary, away from the kernel's Karcher mean.
#[derive(Clone, Debug)]
pub struct DegenerationPath {
    /// Starting mapping (after the perturbation, if one was needed).
    pub base: GeodesicMapping,
    pub vertex: usize,
    pub kernel: ConvexDisk,
    pub karcher: HPoint,
    pub target: HPoint,
    pub perturbed: bool,
    pub waypoints: Vec<Waypoint>,
}

impl DegenerationPath {
    pub fn mapping(&self, k: usize) -> GeodesicMapping {
        self.base.with_lift(self.vertex, self.waypoints[k].lift)
    }

    /// First waypoint at which some face at the moving vertex carries
    /// normalized mean value weight `w_ij + w_ik >= 1 - kappa`.
    pub fn first_concentrated(&self, kappa: f64) -> Option<usize> {
        (0..self.waypoints.len()).find(|&k| {
            face_weight_concentration(&self.mapping(k), self.vertex)
                .map_or(true, |c| c >= 1.0 - kappa)
        })
    }
}

/// Largest `w_ij + w_ik` over faces `(i, j, k)` at `i`, for the normalized
/// mean value weights of `phi`; `None` where those are undefined.
pub fn face_weight_concentration(phi: &GeodesicMapping, i: usize) -> Option<f64> {
    let complex = phi.complex();
    let w = normalize(complex, &mean_value_weights(phi).ok()?).into_weights();
    complex
        .ring(i)
        .iter()
        .map(|&d| {
            w.get(d)
                + w.get(
                    complex
                        .directed_index(i, complex.apex(d))
                        .expect("face edge"),
                )
        })
        .reduce(f64::max)
}

/// Degenerating path for vertex `v` with `steps + 1` waypoints at `k/steps`.
/// If `v` sits on the kernel's Karcher mean it is first nudged by a random
/// offset of norm 1e-6 drawn from `seed`.
pub fn degenerate(
    phi: &GeodesicMapping,
    v: usize,
    steps: usize,
    seed: u64,
) -> Result<DegenerationPath> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be positive".into()));
    }
    let kernel = compute_kernel(&star_polygon(phi, v)?)?;
    let karcher = karcher_mean(&kernel, KARCHER_TOL)?;
    let mut base = phi.clone();
    let mut perturbed = false;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while dist(base.lift(v), &karcher) < COINCIDE {
        let th = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let offset = HTangent::from_components(
            *phi.lift(v),
            PERTURB_NORM * th.cos(),
            PERTURB_NORM * th.sin(),
        );
        let q = exp_map(&offset);
        if kernel.is_interior(&q, 0.0) {
            base = phi.with_lift(v, q);
            perturbed = true;
        }
    }
    let start = *base.lift(v);
    let target = radial_project(&kernel, &karcher, &start)?;
    let waypoints = (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            let lift = geodesic_eval(&start, &target, t);
            let m = move_vertex_in(&base, v, &kernel, &lift)?;
            Ok(Waypoint {
                t,
                lift,
                theta_min: m.theta_min(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DegenerationPath {
        base,
        vertex: v,
        kernel,
        karcher,
        target,
        perturbed,
        waypoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_genus2;
    use crate::triangulation::build_base_triangulation;
    use std::f64::consts::PI;

    fn base() -> GeodesicMapping {
        let (g, d) = build_genus2();
        build_base_triangulation(&g, &d).1
    }

    #[test]
    fn star_matches_ring() {
        let phi = base();
        for v in [0, 1, 10, 45] {
            let s = star_polygon(&phi, v).unwrap();
            assert_eq!(s.boundary.len(), phi.complex().degree(v));
            let n = s.spokes.len();
            let total: f64 = (0..n)
                .map(|k| s.spokes[k].signed_angle_to(&s.spokes[(k + 1) % n]))
                .sum();
            assert!((total - 2.0 * PI).abs() < 1e-9);
            // consecutive link vertices span a face with v
            for k in 0..n {
                let tri = [v, s.link[k], s.link[(k + 1) % n]];
                assert!(phi.complex().find_face(tri).is_some());
            }
        }
    }

    #[test]
    fn quadrature_area_matches_angle_defect() {
        let d = ConvexDisk::regular(&HPoint::polar(0.7, 0.3), 5, 1.3, 0.1);
        let errs: Vec<f64> = [2, 4, 8, 16]
            .iter()
            .map(|&m| (Quadrature::new(&d, m).area() - d.area()).abs())
            .collect();
        assert!(errs.windows(2).all(|e| e[1] < e[0] / 16.0), "{errs:?}");
        assert!(errs[3] < 1e-7);
        let five = 5.0;
        // right triangle center, vertex, edge midpoint: cosh r = cot A cot B
        let interior = 2.0 * (1.0 / (1.3f64.cosh() * (PI / five).tan())).atan();
        let expected = (five - 2.0) * PI - five * interior;
        assert!((d.area() - expected).abs() < 1e-10);
    }

    #[test]
    fn kernel_of_reflex_star_is_smaller() {
        // regular hexagon star with one link vertex pulled toward the center
        let mut boundary: Vec<HPoint> = (0..6)
            .map(|k| HPoint::polar(1.0, k as f64 * PI / 3.0))
            .collect();
        boundary[2] = HPoint::polar(0.3, 2.0 * PI / 3.0);
        let o = HPoint::origin();
        let star = StarPolygon {
            vertex: 0,
            center: o,
            link: (1..7).collect(),
            spokes: boundary.iter().map(|b| log_map(&o, b)).collect(),
            boundary,
        };
        let k = compute_kernel(&star).unwrap();
        assert!(k.area() < star.area() - 1e-6);
        assert!(k.contains(&o, 0.0));
        assert!(k.is_convex(8));
    }

    #[test]
    fn clip_never_enlarges() {
        let d = ConvexDisk::regular(&HPoint::origin(), 6, 1.0, 0.0);
        let h =
            OrientedGeodesic::through(&HPoint::polar(0.5, 2.0), &HPoint::polar(0.5, -2.0)).unwrap();
        let c = d.clip(&h).unwrap();
        assert!(c.area() < d.area());
        assert!(c.boundary.iter().all(|p| d.contains(p, 1e-10)));
    }

    #[test]
    fn karcher_center_of_regular_polygons() {
        for k in 3..=8 {
            let d = ConvexDisk::regular(&HPoint::origin(), k, 1.2, 0.4);
            let b = karcher_mean(&d, 1e-10).unwrap();
            assert!(
                dist(&b, &HPoint::origin()) < 1e-6,
                "{k}: {}",
                dist(&b, &HPoint::origin())
            );
        }
    }

    #[test]
    fn radial_projection_on_axis() {
        let d = ConvexDisk::regular(&HPoint::origin(), 6, 1.0, 0.0);
        let o = HPoint::origin();
        let z = radial_project(&d, &o, &HPoint::polar(0.2, PI / 6.0)).unwrap();
        // apothem direction: the edge midpoint
        let mid = geodesic_eval(&d.boundary[0], &d.boundary[1], 0.5);
        assert!(dist(&z, &mid) < 1e-10);
        assert!(matches!(
            radial_project(&d, &o, &o),
            Err(Error::ProjectionAtCenter)
        ));
        let corner = d.boundary[3];
        assert!(dist(&radial_project(&d, &o, &corner).unwrap(), &corner) < 1e-10);
    }

    #[test]
    fn convex_star_is_its_own_kernel() {
        let c = HPoint::polar(0.8, 1.0);
        let g = HIsometry::boost_to(&c);
        let boundary: Vec<HPoint> = (0..7)
            .map(|k| {
                g.apply(&HPoint::polar(
                    0.5 + 0.05 * (k % 3) as f64,
                    k as f64 * 2.0 * PI / 7.0,
                ))
            })
            .collect();
        let star = StarPolygon {
            vertex: 0,
            center: c,
            link: (1..8).collect(),
            spokes: boundary.iter().map(|b| log_map(&c, b)).collect(),
            boundary,
        };
        let k = compute_kernel(&star).unwrap();
        assert!(hausdorff(&k.boundary, &star.boundary) < 1e-8);
    }

    #[test]
    fn karcher_gradient_matches_finite_differences() {
        let d = ConvexDisk::regular(&HPoint::polar(0.4, 2.0), 5, 0.9, 0.3);
        let q = Quadrature::new(&d, KARCHER_SUBDIVISION);
        let x = HPoint::polar(0.6, 1.7);
        let g = q.gradient(&x);
        let h = 1e-5;
        for (ex, ey) in [(1.0, 0.0), (0.0, 1.0), (0.6, -0.8)] {
            let e = HTangent::from_components(x, ex, ey);
            let fd =
                (q.energy(&exp_map(&e.scale(h))) - q.energy(&exp_map(&e.scale(-h)))) / (2.0 * h);
            assert!((fd - g.dot(&e)).abs() < 1e-5, "{fd} {}", g.dot(&e));
        }
    }

    #[test]
    fn karcher_is_local_minimum_and_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let d = ConvexDisk::regular(&HPoint::origin(), 4, 1.0, 0.0)
            .clip(
                &OrientedGeodesic::through(&HPoint::polar(0.6, 0.2), &HPoint::polar(0.6, 1.5))
                    .unwrap(),
            )
            .unwrap();
        let q = Quadrature::new(&d, KARCHER_SUBDIVISION);
        let b = karcher_mean(&d, KARCHER_TOL).unwrap();
        assert!(d.is_interior(&b, 0.0));
        let e = q.energy(&b);
        for _ in 0..20 {
            let th: f64 = rng.gen_range(-PI..PI);
            let p = exp_map(&HTangent::from_components(
                b,
                1e-3 * th.cos(),
                1e-3 * th.sin(),
            ));
            assert!(q.energy(&p) >= e);
        }
        let g = HIsometry::random(&mut rng, 1.5);
        let gb = karcher_mean(&d.transform(&g), KARCHER_TOL).unwrap();
        assert!(dist(&gb, &g.apply(&b)) < 1e-6);
    }

    #[test]
    fn move_vertex_interior_and_boundary() {
        let phi = base();
        let v = 30;
        let k = compute_kernel(&star_polygon(&phi, v).unwrap()).unwrap();
        assert!(k.contains(phi.lift(v), 0.0));
        let same = move_vertex(&phi, v, phi.lift(v)).unwrap();
        assert_eq!(same.lifts(), phi.lifts());
        let b = karcher_mean(&k, KARCHER_TOL).unwrap();
        assert!(move_vertex(&phi, v, &b).unwrap().is_embedded());
        let z = radial_project(&k, &b, phi.lift(v)).unwrap();
        let edge = move_vertex(&phi, v, &z).unwrap();
        assert!(!edge.is_embedded());
        let outside = geodesic_eval(&b, &z, 1.1);
        assert!(matches!(
            move_vertex(&phi, v, &outside),
            Err(Error::OutsideKernel)
        ));
    }

    #[test]
    fn degenerate_path_shape() {
        let phi = base();
        let path = degenerate(&phi, 30, 8, 0).unwrap();
        assert!(!path.perturbed);
        assert_eq!(path.waypoints.len(), 9);
        assert_eq!(path.waypoints[0].theta_min, phi.theta_min());
        for k in 0..8 {
            assert!(path.waypoints[k].theta_min > 0.0);
            let m = path.mapping(k);
            for u in (0..46).filter(|&u| u != 30) {
                assert_eq!(m.lift(u).to_array(), phi.lift(u).to_array());
            }
        }
        assert!(path.waypoints[8].theta_min < 1e-3);
        assert!(path.first_concentrated(0.1).is_some());
    }

    #[test]
    fn degenerate_center_vertex_needs_perturbation() {
        // the octagon center is fixed by the rotation by pi, so by symmetry
        // its kernel's Karcher mean is the vertex itself
        let phi = base();
        let path = degenerate(&phi, 0, 4, 7).unwrap();
        assert!(path.perturbed);
        assert!(path.waypoints.last().unwrap().theta_min < 1e-3);
    }
}
