use std::sync::Arc;

use super::{GeodesicMapping, SimplicialSurface};
use crate::hypgeom::{dist, geodesic_eval, HIsometry, HPoint};
use crate::surface::{FuchsianGroup, FundamentalDomain, GroupWord, Letter};

const SAME_POINT: f64 = 1e-9;

/// Points of the closed octagon, deduplicated by position.
struct PointSet(Vec<HPoint>);

impl PointSet {
    fn insert(&mut self, p: HPoint) -> usize {
        if let Some(i) = self.find(&p) {
            return i;
        }
        self.0.push(p);
        self.0.len() - 1
    }

    fn find(&self, p: &HPoint) -> Option<usize> {
        self.0.iter().position(|q| dist(p, q) < SAME_POINT)
    }
}

/// Second barycentric subdivision of the one-vertex octagon cell structure
/// of the genus-2 surface, with geodesic edges.
///
/// The first subdivision has the center, the 8 corners and the 8 side
/// midpoints of the octagon (6 surface vertices after gluing, 16 triangles).
/// Each of its triangles is split into 6 around its centroid. The result has
/// 46 vertices, 144 edges and 96 faces. Lifts lie in the closed octagon and
/// deck labels come from the side pairings.
pub fn build_base_triangulation(
    group: &FuchsianGroup,
    domain: &FundamentalDomain,
) -> (Arc<SimplicialSurface>, GeodesicMapping) {
    let o = HPoint::origin();
    let corners = domain.vertices;
    let mids: Vec<HPoint> = (0..8)
        .map(|k| geodesic_eval(&corners[k], &corners[(k + 1) % 8], 0.5))
        .collect();

    let mut coarse = Vec::with_capacity(16);
    for k in 0..8 {
        coarse.push([o, corners[k], mids[k]]);
        coarse.push([o, mids[k], corners[(k + 1) % 8]]);
    }

    let mut points = PointSet(Vec::new());
    points.insert(o);
    for k in 0..8 {
        points.insert(corners[k]);
    }
    for m in &mids {
        points.insert(*m);
    }

    let mut tris: Vec<[usize; 3]> = Vec::with_capacity(96);
    for [a, b, c] in coarse {
        let g = HPoint::centroid([&a, &b, &c]).expect("non-degenerate triangle");
        let ab = geodesic_eval(&a, &b, 0.5);
        let bc = geodesic_eval(&b, &c, 0.5);
        let ca = geodesic_eval(&c, &a, 0.5);
        let mut id = |p: HPoint| points.insert(p);
        let (a, b, c, g, ab, bc, ca) = (id(a), id(b), id(c), id(g), id(ab), id(bc), id(ca));
        tris.extend([
            [a, ab, g],
            [ab, b, g],
            [b, bc, g],
            [bc, c, g],
            [c, ca, g],
            [ca, a, g],
        ]);
    }

    // Glue boundary copies: if l(P) = Q then P, Q are the same surface vertex
    // and the lift word of Q is l times that of P.
    let pts = &points.0;
    let mut class = vec![usize::MAX; pts.len()];
    let mut word = vec![GroupWord::identity(); pts.len()];
    let mut lifts = Vec::new();
    for start in 0..pts.len() {
        if class[start] != usize::MAX {
            continue;
        }
        let id = lifts.len();
        lifts.push(pts[start]);
        class[start] = id;
        let mut queue = vec![start];
        while let Some(p) = queue.pop() {
            for l in Letter::all() {
                let image = group.generator(l).apply(&pts[p]);
                if let Some(q) = points.find(&image) {
                    if class[q] == usize::MAX {
                        class[q] = id;
                        word[q] = GroupWord::single(l).mul(&word[p]);
                        queue.push(q);
                    }
                }
            }
        }
    }

    let faces: Vec<[usize; 3]> = tris
        .iter()
        .map(|t| [class[t[0]], class[t[1]], class[t[2]]])
        .collect();
    let complex = Arc::new(
        SimplicialSurface::from_faces(lifts.len(), faces)
            .expect("base triangulation is a valid surface"),
    );

    // Label each directed edge with the shortest word reaching the copy of
    // its head that is adjacent in the octagon picture.
    let ball: Vec<(GroupWord, HIsometry)> = GroupWord::ball(4)
        .into_iter()
        .map(|w| {
            let m = group.eval(&w);
            (w, m)
        })
        .collect();
    let mut labels: Vec<Option<GroupWord>> = vec![None; complex.n_directed()];
    for t in &tris {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
            let d = complex
                .directed_index(class[a], class[b])
                .expect("triangle edge");
            if labels[d].is_some() {
                continue;
            }
            let target = group.eval(&word[a]).inverse().apply(&pts[b]);
            let head = lifts[class[b]];
            let (w, _) = ball
                .iter()
                .find(|(_, m)| dist(&m.apply(&head), &target) < 1e-7)
                .expect("adjacent copies differ by a short word");
            labels[SimplicialSurface::twin(d)] = Some(w.inverse());
            labels[d] = Some(w.clone());
        }
    }
    let words = labels
        .into_iter()
        .map(|w| w.expect("every edge labelled"))
        .collect();
    let mapping = GeodesicMapping::new(Arc::clone(&complex), lifts, words, group)
        .expect("base labels satisfy the mapping invariants");
    (complex, mapping)
}
