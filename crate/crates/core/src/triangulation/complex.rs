use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};

/// A closed, oriented, simplicial genus-2 surface `T = (V, E, F)`.
///
/// Undirected edge `e = (i, j)` with `i < j` owns the directed edges
/// `2e` (`i -> j`) and `2e + 1` (`j -> i`), so twins differ in the lowest bit.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplicialSurface {
    n_vertices: usize,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 3]>,
    directed_lookup: HashMap<(usize, usize), usize>,
    /// Face containing each directed edge in its boundary orientation.
    left_face: Vec<usize>,
    /// Third vertex of `left_face`.
    apex: Vec<usize>,
    /// Outgoing directed edges of each vertex in counter-clockwise order.
    rings: Vec<Vec<usize>>,
}

impl SimplicialSurface {
    /// Builds the complex from counter-clockwise oriented faces and checks
    /// that it is a closed, consistently oriented genus-2 surface.
    pub fn from_faces(n_vertices: usize, faces: Vec<[usize; 3]>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidComplex(msg));
        let mut triples = HashSet::new();
        let mut face_of_directed: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for (f, &[a, b, c]) in faces.iter().enumerate() {
            if a >= n_vertices || b >= n_vertices || c >= n_vertices {
                return bad(format!("face {f} references a missing vertex"));
            }
            if a == b || b == c || a == c {
                return bad(format!("face {f} has a repeated vertex"));
            }
            let mut key = [a, b, c];
            key.sort_unstable();
            if !triples.insert(key) {
                return bad(format!("face {f} duplicates the vertex triple {key:?}"));
            }
            for (i, j, k) in [(a, b, c), (b, c, a), (c, a, b)] {
                if face_of_directed.insert((i, j), (f, k)).is_some() {
                    return bad(format!(
                        "directed edge {i}->{j} appears twice (orientation or manifold violation)"
                    ));
                }
            }
        }
        for &(i, j) in face_of_directed.keys() {
            if !face_of_directed.contains_key(&(j, i)) {
                return bad(format!("edge {i}-{j} borders only one face"));
            }
        }

        let mut edges: Vec<[usize; 2]> = face_of_directed
            .keys()
            .filter(|(i, j)| i < j)
            .map(|&(i, j)| [i, j])
            .collect();
        edges.sort_unstable();

        let mut directed_lookup = HashMap::with_capacity(2 * edges.len());
        let mut left_face = vec![0; 2 * edges.len()];
        let mut apex = vec![0; 2 * edges.len()];
        for (e, &[i, j]) in edges.iter().enumerate() {
            for (d, (s, t)) in [(2 * e, (i, j)), (2 * e + 1, (j, i))] {
                directed_lookup.insert((s, t), d);
                let (f, k) = face_of_directed[&(s, t)];
                left_face[d] = f;
                apex[d] = k;
            }
        }

        // walk each vertex link: after i -> j comes i -> apex(i -> j)
        let mut rings = vec![Vec::new(); n_vertices];
        let mut out_degree = vec![0usize; n_vertices];
        for &[i, j] in &edges {
            out_degree[i] += 1;
            out_degree[j] += 1;
        }
        for (v, ring) in rings.iter_mut().enumerate() {
            if out_degree[v] < 3 {
                return bad(format!("vertex {v} has degree {}", out_degree[v]));
            }
            let start = edges
                .iter()
                .find_map(|&[i, j]| {
                    if i == v {
                        Some(j)
                    } else if j == v {
                        Some(i)
                    } else {
                        None
                    }
                })
                .expect("degree checked");
            let mut j = start;
            loop {
                ring.push(directed_lookup[&(v, j)]);
                j = face_of_directed[&(v, j)].1;
                if j == start {
                    break;
                }
                if ring.len() > out_degree[v] {
                    return bad(format!("link of vertex {v} is not a cycle"));
                }
            }
            if ring.len() != out_degree[v] {
                return bad(format!("link of vertex {v} is not a single cycle"));
            }
        }

        let complex = SimplicialSurface {
            n_vertices,
            edges,
            faces,
            directed_lookup,
            left_face,
            apex,
            rings,
        };
        if complex.euler_characteristic() != -2 {
            return bad(format!(
                "Euler characteristic {} (expected -2)",
                complex.euler_characteristic()
            ));
        }
        Ok(complex)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn n_directed(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// `(tail, head)` of directed edge `d`.
    pub fn directed(&self, d: usize) -> (usize, usize) {
        let [i, j] = self.edges[d / 2];
        if d % 2 == 0 {
            (i, j)
        } else {
            (j, i)
        }
    }

    pub fn directed_index(&self, i: usize, j: usize) -> Option<usize> {
        self.directed_lookup.get(&(i, j)).copied()
    }

    pub fn twin(d: usize) -> usize {
        d ^ 1
    }

    pub fn left_face(&self, d: usize) -> usize {
        self.left_face[d]
    }

    /// Third vertex of the face on the left of `d`.
    pub fn apex(&self, d: usize) -> usize {
        self.apex[d]
    }

    /// Outgoing directed edges of `v`, counter-clockwise.
    pub fn ring(&self, v: usize) -> &[usize] {
        &self.rings[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rings[v].len()
    }

    /// Faces incident to `v`, as `(face, j, k)` with `(v, j, k)` oriented,
    /// in counter-clockwise order.
    pub fn star_faces(&self, v: usize) -> Vec<(usize, usize, usize)> {
        self.rings[v]
            .iter()
            .map(|&d| (self.left_face[d], self.directed(d).1, self.apex[d]))
            .collect()
    }

    /// Face index of an oriented triple in any rotation, if present.
    pub fn find_face(&self, tri: [usize; 3]) -> Option<usize> {
        let d = self.directed_index(tri[0], tri[1])?;
        (self.apex[d] == tri[2]).then(|| self.left_face[d])
    }

    /// Whether the vertex permutation `perm` maps faces to faces. With
    /// `orientation_reversing` the image faces are matched with reversed order.
    pub fn is_automorphism(&self, perm: &[usize], orientation_reversing: bool) -> bool {
        perm.len() == self.n_vertices
            && self.faces.iter().all(|&[a, b, c]| {
                let t = if orientation_reversing {
                    [perm[a], perm[c], perm[b]]
                } else {
                    [perm[a], perm[b], perm[c]]
                };
                self.find_face(t).is_some()
            })
    }
}
