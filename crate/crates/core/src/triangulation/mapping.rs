use std::f64::consts::PI;
use std::sync::Arc;

use rand::Rng;

use super::SimplicialSurface;
use crate::error::{Error, Result};
use crate::hypgeom::{angle, dist, exp_map, geodesic_eval, log_map, HIsometry, HPoint, HTangent};
use crate::surface::{FuchsianGroup, GroupWord};

/// Corners with signed angle within this of 0 or pi count as degenerate.
pub const EMBED_ANGLE_EPS: f64 = 1e-9;

/// Sample intervals per edge in [`mapping_distance`].
pub const EDGE_SAMPLES: usize = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct DeckLabel {
    pub word: GroupWord,
    pub matrix: HIsometry,
}

/// A geodesic mapping of the 1-skeleton: lifted vertex positions `q_i` and a
/// deck label `g_ij` per directed edge, so that edge `ij` lifts to the
/// geodesic from `q_i` to `g_ij q_j`. The labels fix the homotopy class and
/// are never rewritten by vertex moves.
#[derive(Clone, Debug)]
pub struct GeodesicMapping {
    complex: Arc<SimplicialSurface>,
    lifts: Vec<HPoint>,
    deck: Arc<Vec<DeckLabel>>,
}

/// Inner angles per face corner (`corners[f][c]` is the angle at
/// `faces[f][c]`) and their minimum.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleReport {
    pub corners: Vec<[f64; 3]>,
    pub theta_min: f64,
    /// Corners with a zero-length edge; recorded as angle 0.
    pub degenerate_corners: usize,
}

impl GeodesicMapping {
    /// Assembles a mapping and checks the reversal and face-closure invariants.
    pub fn new(
        complex: Arc<SimplicialSurface>,
        lifts: Vec<HPoint>,
        words: Vec<GroupWord>,
        group: &FuchsianGroup,
    ) -> Result<Self> {
        if lifts.len() != complex.n_vertices() {
            return Err(Error::InvalidMapping(format!(
                "{} lifts for {} vertices",
                lifts.len(),
                complex.n_vertices()
            )));
        }
        if words.len() != complex.n_directed() {
            return Err(Error::InvalidMapping(format!(
                "{} deck labels for {} directed edges",
                words.len(),
                complex.n_directed()
            )));
        }
        let deck = words
            .into_iter()
            .map(|word| DeckLabel {
                matrix: group.eval(&word),
                word,
            })
            .collect();
        let m = GeodesicMapping {
            complex,
            lifts,
            deck: Arc::new(deck),
        };
        m.check_labels()?;
        Ok(m)
    }

    fn check_labels(&self) -> Result<()> {
        for d in (0..self.deck.len()).step_by(2) {
            let (a, b) = (&self.deck[d], &self.deck[d + 1]);
            if a.matrix.compose(&b.matrix).identity_residual() > 1e-10 * label_scale(&[a, b]) {
                let (i, j) = self.complex.directed(d);
                return Err(Error::InvalidMapping(format!(
                    "labels of {i}->{j} and {j}->{i} are not inverse"
                )));
            }
        }
        for (f, &[i, j, k]) in self.complex.faces().iter().enumerate() {
            let g = |s, t| &self.deck[self.complex.directed_index(s, t).expect("face edge")];
            let (a, b, c) = (g(i, j), g(j, k), g(k, i));
            let loop_ = a.matrix.compose(&b.matrix).compose(&c.matrix);
            if loop_.identity_residual() > 1e-9 * label_scale(&[a, b, c]) {
                return Err(Error::InvalidMapping(format!(
                    "face {f} boundary is not null-homotopic"
                )));
            }
        }
        Ok(())
    }

    pub fn complex(&self) -> &Arc<SimplicialSurface> {
        &self.complex
    }

    pub fn lifts(&self) -> &[HPoint] {
        &self.lifts
    }

    pub fn lift(&self, i: usize) -> &HPoint {
        &self.lifts[i]
    }

    pub fn deck(&self, d: usize) -> &DeckLabel {
        &self.deck[d]
    }

    pub fn deck_labels(&self) -> &[DeckLabel] {
        &self.deck
    }

    /// True if both mappings carry identical deck words on the same complex.
    pub fn same_class(&self, other: &GeodesicMapping) -> bool {
        (Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex)
            && (Arc::ptr_eq(&self.deck, &other.deck)
                || self
                    .deck
                    .iter()
                    .zip(other.deck.iter())
                    .all(|(a, b)| a.word == b.word))
    }

    /// Same labels, new lifted positions.
    pub fn with_lifts(&self, lifts: Vec<HPoint>) -> Self {
        assert_eq!(lifts.len(), self.lifts.len());
        GeodesicMapping {
            complex: Arc::clone(&self.complex),
            lifts,
            deck: Arc::clone(&self.deck),
        }
    }

    /// Replaces the lift of `v` only.
    pub fn with_lift(&self, v: usize, p: HPoint) -> Self {
        let mut lifts = self.lifts.clone();
        lifts[v] = p;
        self.with_lifts(lifts)
    }

    /// Lifted head of directed edge `d` as seen from its tail: `g_ij q_j`.
    pub fn head_position(&self, d: usize) -> HPoint {
        let (_, j) = self.complex.directed(d);
        self.deck[d].matrix.apply(&self.lifts[j])
    }

    /// `v_ij = log(q_i, g_ij q_j)`.
    pub fn edge_vector(&self, d: usize) -> HTangent {
        let (i, _) = self.complex.directed(d);
        log_map(&self.lifts[i], &self.head_position(d))
    }

    pub fn edge_vector_between(&self, i: usize, j: usize) -> Result<HTangent> {
        let d = self
            .complex
            .directed_index(i, j)
            .ok_or_else(|| Error::InvalidInput(format!("{i}->{j} is not an edge")))?;
        Ok(self.edge_vector(d))
    }

    pub fn edge_length(&self, d: usize) -> f64 {
        let (i, _) = self.complex.directed(d);
        dist(&self.lifts[i], &self.head_position(d))
    }

    /// The three lifted corners of face `f`, in the frame of corner `c`
    /// (so the first returned point is `q_{faces[f][c]}`).
    pub fn face_in_frame(&self, f: usize, c: usize) -> [HPoint; 3] {
        let tri = self.complex.faces()[f];
        let i = tri[c];
        let j = tri[(c + 1) % 3];
        let k = tri[(c + 2) % 3];
        let dj = self.complex.directed_index(i, j).expect("face edge");
        let dk = self.complex.directed_index(i, k).expect("face edge");
        [
            self.lifts[i],
            self.head_position(dj),
            self.head_position(dk),
        ]
    }

    /// Signed angle at corner `c` of face `f`; positive for a
    /// counter-clockwise (correctly oriented) corner.
    pub fn signed_corner(&self, f: usize, c: usize) -> Option<f64> {
        let [p, a, b] = self.face_in_frame(f, c);
        crate::hypgeom::signed_angle(&p, &a, &b).ok()
    }

    pub fn angle_report(&self) -> AngleReport {
        let mut degenerate_corners = 0;
        let corners: Vec<[f64; 3]> = (0..self.complex.faces().len())
            .map(|f| {
                std::array::from_fn(|c| {
                    let [p, a, b] = self.face_in_frame(f, c);
                    angle(&p, &a, &b).unwrap_or_else(|_| {
                        degenerate_corners += 1;
                        0.0
                    })
                })
            })
            .collect();
        let theta_min = corners
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min);
        AngleReport {
            corners,
            theta_min,
            degenerate_corners,
        }
    }

    pub fn theta_min(&self) -> f64 {
        self.angle_report().theta_min
    }

    /// Membership in `K_eps`: minimum inner angle at least `eps`.
    pub fn in_k_eps(&self, eps: f64) -> bool {
        self.theta_min() >= eps
    }

    /// Local embedding test: every corner positively oriented with angle in
    /// `(0, pi)`, and the corners around every vertex sum to exactly `2 pi`.
    pub fn is_embedded(&self) -> bool {
        let n = self.complex.n_vertices();
        let mut sums = vec![0.0; n];
        for (f, tri) in self.complex.faces().iter().enumerate() {
            for (c, &v) in tri.iter().enumerate() {
                match self.signed_corner(f, c) {
                    Some(a) if a > EMBED_ANGLE_EPS && a < PI - EMBED_ANGLE_EPS => sums[v] += a,
                    _ => return false,
                }
            }
        }
        sums.iter().all(|s| (s - 2.0 * PI).abs() < 1e-6)
    }

    /// Deck-relabels vertex `v`: its lift becomes `g q_v` and incident labels
    /// are rewritten so every edge keeps the same image in the surface.
    pub fn relift_vertex(&self, v: usize, g: &GroupWord, group: &FuchsianGroup) -> Result<Self> {
        let gm = group.eval(g);
        let mut lifts = self.lifts.clone();
        lifts[v] = gm.apply(&lifts[v]);
        let words = (0..self.complex.n_directed())
            .map(|d| {
                let (i, j) = self.complex.directed(d);
                let mut w = self.deck[d].word.clone();
                if i == v {
                    w = g.mul(&w);
                }
                if j == v {
                    w = w.mul(&g.inverse());
                }
                w
            })
            .collect();
        GeodesicMapping::new(Arc::clone(&self.complex), lifts, words, group)
    }
}

/// Rounding scale of a product of labels: short words (the usual case) have
/// matrices of norm close to 1; long translations amplify rounding.
fn label_scale(labels: &[&DeckLabel]) -> f64 {
    labels
        .iter()
        .map(|l| l.matrix.matrix().norm() / 3f64.sqrt())
        .product::<f64>()
        .max(1.0)
}

/// Sup-distance between two mappings in the same class, approximated by the
/// vertex distances and [`EDGE_SAMPLES`] uniform samples per edge.
pub fn mapping_distance(a: &GeodesicMapping, b: &GeodesicMapping) -> Result<f64> {
    if !a.same_class(b) {
        return Err(Error::DifferentHomotopyClass);
    }
    let mut best: f64 = a
        .lifts
        .iter()
        .zip(&b.lifts)
        .map(|(p, q)| dist(p, q))
        .fold(0.0, f64::max);
    for e in 0..a.complex.edges().len() {
        let d = 2 * e;
        let (i, _) = a.complex.directed(d);
        let (pa, qa) = (a.lifts[i], a.head_position(d));
        let (pb, qb) = (b.lifts[i], b.head_position(d));
        let (va, vb) = (log_map(&pa, &qa), log_map(&pb, &qb));
        for s in 1..EDGE_SAMPLES {
            let t = s as f64 / EDGE_SAMPLES as f64;
            let x = exp_map(&va.scale(t));
            let y = exp_map(&vb.scale(t));
            best = best.max(dist(&x, &y));
        }
    }
    Ok(best)
}

/// Moves the lift of `v` by `exp(offset)`; labels and other lifts unchanged.
pub fn perturb_vertex(phi: &GeodesicMapping, v: usize, offset: &HTangent) -> GeodesicMapping {
    let base = *phi.lift(v);
    let t = HTangent::new(base, offset.vec);
    phi.with_lift(v, exp_map(&t))
}

/// Random embedded perturbation: every vertex moves by at most
/// `fraction` of its shortest incident edge, halving until embedded.
pub fn jitter<R: Rng>(phi: &GeodesicMapping, rng: &mut R, fraction: f64) -> GeodesicMapping {
    let complex = phi.complex();
    let mut scale = fraction;
    loop {
        let lifts = (0..complex.n_vertices())
            .map(|v| {
                let shortest = complex
                    .ring(v)
                    .iter()
                    .map(|&d| phi.edge_length(d))
                    .fold(f64::INFINITY, f64::min);
                let r = scale * shortest * rng.gen_range(0.0..1.0f64).sqrt();
                let th = rng.gen_range(-PI..PI);
                exp_map(&HTangent::from_components(
                    *phi.lift(v),
                    r * th.cos(),
                    r * th.sin(),
                ))
            })
            .collect();
        let out = phi.with_lifts(lifts);
        if out.is_embedded() || scale < 1e-6 {
            return out;
        }
        scale *= 0.5;
    }
}

/// Point on edge `d` at parameter `t`, in the tail's frame.
pub fn edge_point(phi: &GeodesicMapping, d: usize, t: f64) -> HPoint {
    let (i, _) = phi.complex().directed(d);
    geodesic_eval(phi.lift(i), &phi.head_position(d), t)
}
