//! Hyperbolic plane primitives in the hyperboloid model.
//!
//! Points live on the upper sheet `{x : <x,x> = -1, x0 > 0}` of Minkowski space
//! `R^{2,1}` with `<a,b> = -a0 b0 + a1 b1 + a2 b2`. Curvature is fixed at -1.
//! Every operation that produces a point re-projects it onto the sheet along the
//! `x0` axis, so drift stays bounded over long iterations.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

use crate::error::{Error, Result};

/// Lengths below this are treated as zero (coincident points).
pub const DEGENERATE_LENGTH: f64 = 1e-14;

/// Minkowski bilinear form `-a0 b0 + a1 b1 + a2 b2`.
#[inline]
pub fn mdot(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `J (a x b)`; Minkowski-orthogonal to both `a` and `b`.
#[inline]
pub fn mcross(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    let c = a.cross(b);
    Vector3::new(-c[0], c[1], c[2])
}

#[inline]
fn det3(a: &Vector3<f64>, b: &Vector3<f64>, c: &Vector3<f64>) -> f64 {
    a.dot(&b.cross(c))
}

/// A point of the hyperbolic plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint(Vector3<f64>);

impl HPoint {
    pub fn origin() -> Self {
        HPoint(Vector3::new(1.0, 0.0, 0.0))
    }

    /// Projects `(_, x1, x2)` onto the sheet by recomputing `x0`.
    pub fn from_spatial(x1: f64, x2: f64) -> Self {
        HPoint(Vector3::new((1.0 + x1 * x1 + x2 * x2).sqrt(), x1, x2))
    }

    /// Re-normalizes an arbitrary vector onto the sheet (spatial part kept).
    pub fn project(v: Vector3<f64>) -> Self {
        Self::from_spatial(v[1], v[2])
    }

    /// Radial normalization of a future-timelike vector: `v / sqrt(-<v,v>)`.
    /// Used for projective constructions (barycenters, line intersections).
    pub fn normalize_timelike(v: &Vector3<f64>) -> Option<Self> {
        let n = -mdot(v, v);
        if !(n > 0.0) || v[0] <= 0.0 {
            return None;
        }
        Some(Self::project(v / n.sqrt()))
    }

    /// Point at distance `r` from the origin in direction `theta`.
    pub fn polar(r: f64, theta: f64) -> Self {
        Self::from_spatial(r.sinh() * theta.cos(), r.sinh() * theta.sin())
    }

    pub fn coords(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0[0], self.0[1], self.0[2]]
    }

    /// Accepts raw coordinates if they lie on the sheet within `tol`.
    pub fn from_array(a: [f64; 3], tol: f64) -> Option<Self> {
        let v = Vector3::new(a[0], a[1], a[2]);
        if !a.iter().all(|x| x.is_finite()) || v[0] <= 0.0 {
            return None;
        }
        if (mdot(&v, &v) + 1.0).abs() > tol * v[0] * v[0] {
            return None;
        }
        Some(Self::project(v))
    }

    /// `<x,x> + 1`, zero up to rounding.
    pub fn norm_residual(&self) -> f64 {
        mdot(&self.0, &self.0) + 1.0
    }

    /// Euclidean sum of points re-normalized; the projective (Klein) centroid.
    pub fn centroid<'a>(points: impl IntoIterator<Item = &'a HPoint>) -> Option<HPoint> {
        let mut s = Vector3::zeros();
        for p in points {
            s += p.0;
        }
        Self::normalize_timelike(&s)
    }
}

/// A tangent vector `vec` at `base`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HTangent {
    pub base: HPoint,
    pub vec: Vector3<f64>,
}

impl HTangent {
    /// Builds a tangent vector, removing any normal component.
    pub fn new(base: HPoint, vec: Vector3<f64>) -> Self {
        let p = base.0;
        let vec = vec + p * mdot(&vec, &p);
        HTangent { base, vec }
    }

    pub fn zero(base: HPoint) -> Self {
        HTangent {
            base,
            vec: Vector3::zeros(),
        }
    }

    /// Tangent vector at `base` from planar components in the frame
    /// obtained by moving the origin frame to `base` along a geodesic.
    pub fn from_components(base: HPoint, x: f64, y: f64) -> Self {
        let (e1, e2) = tangent_frame(&base);
        HTangent::new(base, e1 * x + e2 * y)
    }

    pub fn norm(&self) -> f64 {
        mdot(&self.vec, &self.vec).max(0.0).sqrt()
    }

    pub fn dot(&self, other: &HTangent) -> f64 {
        mdot(&self.vec, &other.vec)
    }

    pub fn scale(&self, s: f64) -> Self {
        HTangent {
            base: self.base,
            vec: self.vec * s,
        }
    }

    pub fn add(&self, other: &HTangent) -> Self {
        HTangent {
            base: self.base,
            vec: self.vec + other.vec,
        }
    }

    /// Oriented area of the parallelogram spanned by `self` and `other`
    /// (positive when `other` is counter-clockwise from `self`).
    pub fn wedge(&self, other: &HTangent) -> f64 {
        det3(&self.base.0, &self.vec, &other.vec)
    }

    /// Signed angle in `(-pi, pi]` from `self` to `other`.
    pub fn signed_angle_to(&self, other: &HTangent) -> f64 {
        self.wedge(other).atan2(self.dot(other))
    }
}

/// Orthonormal tangent frame at `p`, the image of the standard frame at the
/// origin under the boost taking the origin to `p`.
pub fn tangent_frame(p: &HPoint) -> (Vector3<f64>, Vector3<f64>) {
    let boost = HIsometry::boost_to(p);
    (
        boost.matrix() * Vector3::new(0.0, 1.0, 0.0),
        boost.matrix() * Vector3::new(0.0, 0.0, 1.0),
    )
}

/// Orientation-preserving isometry: a Lorentz matrix with `M00 > 0`, `det = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HIsometry(Matrix3<f64>);

impl HIsometry {
    pub fn identity() -> Self {
        HIsometry(Matrix3::identity())
    }

    /// Accepts `m` if it preserves the Minkowski form within `tol`.
    pub fn from_matrix(m: Matrix3<f64>, tol: f64) -> Option<Self> {
        let j = Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0));
        let err = (m.transpose() * j * m - j).norm();
        if err > tol || m[(0, 0)] <= 0.0 || m.determinant() <= 0.0 {
            return None;
        }
        Some(HIsometry(m))
    }

    /// Rotation by `theta` about the origin.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        HIsometry(Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c))
    }

    /// Translation by `d` along the `x1` axis.
    pub fn translation_x(d: f64) -> Self {
        let (s, c) = (d.sinh(), d.cosh());
        HIsometry(Matrix3::new(c, s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    /// The pure boost (no rotation) taking the origin to `p`.
    pub fn boost_to(p: &HPoint) -> Self {
        let x = p.0;
        let r = (x[1] * x[1] + x[2] * x[2]).sqrt();
        if r < 1e-300 {
            return Self::identity();
        }
        let theta = x[2].atan2(x[1]);
        let d = r.asinh();
        Self::rotation(theta)
            .compose(&Self::translation_x(d))
            .compose(&Self::rotation(-theta))
    }

    /// Random isometry moving the origin a distance at most `max_shift`.
    pub fn random<R: Rng>(rng: &mut R, max_shift: f64) -> Self {
        let a = rng.gen_range(-PI..PI);
        let b = rng.gen_range(-PI..PI);
        let d = rng.gen_range(0.0..max_shift);
        Self::rotation(a)
            .compose(&Self::translation_x(d))
            .compose(&Self::rotation(b))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// `self` after `other`, i.e. `x -> self(other(x))`.
    pub fn compose(&self, other: &HIsometry) -> Self {
        HIsometry(self.0 * other.0)
    }

    /// Exact inverse `J M^T J`.
    pub fn inverse(&self) -> Self {
        let j = Matrix3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0));
        HIsometry(j * self.0.transpose() * j)
    }

    pub fn apply(&self, p: &HPoint) -> HPoint {
        HPoint::project(self.0 * p.0)
    }

    pub fn apply_tangent(&self, t: &HTangent) -> HTangent {
        HTangent::new(self.apply(&t.base), self.0 * t.vec)
    }

    pub fn apply_geodesic(&self, g: &OrientedGeodesic) -> OrientedGeodesic {
        OrientedGeodesic::from_normal(self.0 * g.normal)
    }

    /// Frobenius distance to the identity matrix.
    pub fn identity_residual(&self) -> f64 {
        (self.0 - Matrix3::identity()).norm()
    }
}

/// A complete geodesic `{x : <x,u> = 0}` with unit spacelike normal `u`;
/// the closed positive half-plane is `{x : <x,u> <= 0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrientedGeodesic {
    pub normal: Vector3<f64>,
}

impl OrientedGeodesic {
    pub fn from_normal(u: Vector3<f64>) -> Self {
        let n = mdot(&u, &u).sqrt();
        OrientedGeodesic { normal: u / n }
    }

    /// The geodesic through `a` then `b`; points to the left of the direction
    /// `a -> b` (counter-clockwise side) are in the positive half-plane.
    pub fn through(a: &HPoint, b: &HPoint) -> Option<Self> {
        let u = -mcross(&a.0, &b.0);
        let n = mdot(&u, &u);
        if !(n > 0.0) {
            return None;
        }
        Some(OrientedGeodesic {
            normal: u / n.sqrt(),
        })
    }

    /// `<x,u>`: negative inside, positive outside, `sinh` of the signed distance.
    pub fn side(&self, x: &HPoint) -> f64 {
        mdot(&x.0, &self.normal)
    }

    /// Homogeneous side test, valid for any vector with positive `x0`.
    pub fn side_homogeneous(&self, v: &Vector3<f64>) -> f64 {
        mdot(v, &self.normal) / v[0]
    }

    pub fn signed_distance(&self, x: &HPoint) -> f64 {
        self.side(x).asinh()
    }

    /// Closest point of the geodesic to `x`.
    pub fn foot(&self, x: &HPoint) -> HPoint {
        let s = self.side(x);
        HPoint::normalize_timelike(&(x.0 - self.normal * s)).unwrap_or(*x)
    }

    /// Intersection point of two geodesics, if they meet.
    pub fn intersect(&self, other: &OrientedGeodesic) -> Option<HPoint> {
        let v = mcross(&self.normal, &other.normal);
        let v = if v[0] < 0.0 { -v } else { v };
        HPoint::normalize_timelike(&v)
    }
}

/// Hyperbolic distance. Computed from `<p-q,p-q> = 4 sinh^2(d/2)`, which has
/// no cancellation at short range and agrees with `arccosh(-<p,q>)`.
pub fn dist(p: &HPoint, q: &HPoint) -> f64 {
    let d = p.0 - q.0;
    let m = mdot(&d, &d).max(0.0);
    2.0 * (0.5 * m.sqrt()).asinh()
}

/// Exponential map: `base cosh|v| + (v/|v|) sinh|v|`.
pub fn exp_map(t: &HTangent) -> HPoint {
    let n = t.norm();
    let p = t.base.0;
    if n < 1e-300 {
        return t.base;
    }
    let s = if n < 1e-8 {
        1.0 + n * n / 6.0
    } else {
        n.sinh() / n
    };
    HPoint::project(p * n.cosh() + t.vec * s)
}

/// Inverse of [`exp_map`]; `log_map(p, p)` is the zero vector.
pub fn log_map(p: &HPoint, q: &HPoint) -> HTangent {
    let diff = q.0 - p.0;
    let m = mdot(&diff, &diff).max(0.0);
    if m == 0.0 {
        return HTangent::zero(*p);
    }
    let d = 2.0 * (0.5 * m.sqrt()).asinh();
    // q - cosh(d) p, with cosh(d) - 1 = m / 2
    let u = diff - p.0 * (0.5 * m);
    let sinh_d = d.sinh();
    let scale = if d < 1e-8 {
        1.0 - d * d / 6.0
    } else {
        d / sinh_d
    };
    HTangent::new(*p, u * scale)
}

/// Unsigned Riemannian angle at `at` between the geodesics to `to1` and `to2`.
pub fn angle(at: &HPoint, to1: &HPoint, to2: &HPoint) -> Result<f64> {
    let a = log_map(at, to1);
    let b = log_map(at, to2);
    if a.norm() <= DEGENERATE_LENGTH || b.norm() <= DEGENERATE_LENGTH {
        return Err(Error::DegenerateCorner);
    }
    Ok(a.wedge(&b).abs().atan2(a.dot(&b)))
}

/// Signed angle at `at` from the direction of `to1` to that of `to2`.
pub fn signed_angle(at: &HPoint, to1: &HPoint, to2: &HPoint) -> Result<f64> {
    let a = log_map(at, to1);
    let b = log_map(at, to2);
    if a.norm() <= DEGENERATE_LENGTH || b.norm() <= DEGENERATE_LENGTH {
        return Err(Error::DegenerateCorner);
    }
    Ok(a.signed_angle_to(&b))
}

/// Constant-speed geodesic from `p` (t = 0) to `q` (t = 1).
pub fn geodesic_eval(p: &HPoint, q: &HPoint, t: f64) -> HPoint {
    if t == 0.0 {
        return *p;
    }
    if t == 1.0 {
        return *q;
    }
    exp_map(&log_map(p, q).scale(t))
}

/// Area by angle defect; zero for degenerate triangles.
pub fn triangle_area(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    match (angle(a, b, c), angle(b, c, a), angle(c, a, b)) {
        (Ok(x), Ok(y), Ok(z)) => (PI - x - y - z).max(0.0),
        _ => 0.0,
    }
}

/// `det[a,b,c]`; positive iff the triangle `a,b,c` is counter-clockwise.
pub fn orientation(a: &HPoint, b: &HPoint, c: &HPoint) -> f64 {
    det3(&a.0, &b.0, &c.0)
}

/// Poincare disk coordinates.
pub fn to_poincare(p: &HPoint) -> (f64, f64) {
    let x = p.0;
    (x[1] / (1.0 + x[0]), x[2] / (1.0 + x[0]))
}

pub fn from_poincare(u: f64, v: f64) -> Result<HPoint> {
    let r2 = u * u + v * v;
    if !(r2 < 1.0) {
        return Err(Error::OutsideDisk { u, v });
    }
    let s = 2.0 / (1.0 - r2);
    Ok(HPoint::from_spatial(s * u, s * v))
}

/// Distance in the Poincare disk metric, independent of the hyperboloid path.
pub fn poincare_dist(a: (f64, f64), b: (f64, f64)) -> f64 {
    let d2 = (a.0 - b.0).powi(2) + (a.1 - b.1).powi(2);
    let na = 1.0 - a.0 * a.0 - a.1 * a.1;
    let nb = 1.0 - b.0 * b.0 - b.1 * b.1;
    (1.0 + 2.0 * d2 / (na * nb)).acosh()
}
