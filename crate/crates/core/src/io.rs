//! JSON persistence for mappings, weights and degeneration paths.
//!
//! Floats are written in shortest round-trip form and parsed exactly, so a
//! save/load cycle reproduces every lift bit for bit.

use std::collections::HashMap;
use std::sync::Arc;

use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypgeom::HPoint;
use crate::kernel::DegenerationPath;
use crate::surface::{FuchsianGroup, GroupWord};
use crate::triangulation::{GeodesicMapping, SimplicialSurface};
use crate::tutte::WeightVector;

/// Lifts must satisfy `<x,x> = -1` to this tolerance on load.
pub const LIFT_TOL: f64 = 1e-9;

pub fn edge_key(i: usize, j: usize) -> String {
    format!("{i}->{j}")
}

pub fn parse_edge_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("bad edge key {key:?}"));
    let (i, j) = key.split_once("->").ok_or_else(bad)?;
    Ok((i.parse().map_err(|_| bad())?, j.parse().map_err(|_| bad())?))
}

/// Values keyed by `"i->j"`, written in directed-edge order.
struct DirectedMap<'a, T, F: Fn(usize) -> T> {
    complex: &'a SimplicialSurface,
    value: F,
}

impl<T: Serialize, F: Fn(usize) -> T> Serialize for DirectedMap<'_, T, F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.complex.n_directed()))?;
        for d in 0..self.complex.n_directed() {
            let (i, j) = self.complex.directed(d);
            map.serialize_entry(&edge_key(i, j), &(self.value)(d))?;
        }
        map.end()
    }
}

/// Reads a complete `"i->j"` map into directed-edge order.
fn directed_values<T>(complex: &SimplicialSurface, mut map: HashMap<String, T>) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(complex.n_directed());
    for d in 0..complex.n_directed() {
        let (i, j) = complex.directed(d);
        let v = map
            .remove(&edge_key(i, j))
            .ok_or_else(|| Error::InvalidInput(format!("missing entry for {i}->{j}")))?;
        out.push(v);
    }
    if let Some(extra) = map.keys().next() {
        parse_edge_key(extra)?;
        return Err(Error::InvalidInput(format!("{extra} is not an edge")));
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
    faces: Vec<[usize; 3]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MappingIn {
    #[serde(default)]
    seed: Option<u64>,
    complex: ComplexJson,
    lifts: Vec<[f64; 3]>,
    deck: HashMap<String, String>,
}

fn complex_json(c: &SimplicialSurface) -> ComplexJson {
    ComplexJson {
        vertices: c.n_vertices(),
        edges: c.edges().to_vec(),
        faces: c.faces().to_vec(),
    }
}

fn lift_arrays(lifts: &[HPoint]) -> Vec<[f64; 3]> {
    lifts.iter().map(HPoint::to_array).collect()
}

pub fn mapping_to_json(phi: &GeodesicMapping, seed: Option<u64>) -> Result<String> {
    #[derive(Serialize)]
    #[serde(bound = "")]
    struct Out<'a, F: Fn(usize) -> String> {
        seed: Option<u64>,
        complex: ComplexJson,
        lifts: Vec<[f64; 3]>,
        deck: DirectedMap<'a, String, F>,
    }
    let complex = phi.complex();
    let out = Out {
        seed,
        complex: complex_json(complex),
        lifts: lift_arrays(phi.lifts()),
        deck: DirectedMap {
            complex,
            value: |d| phi.deck(d).word.to_string(),
        },
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

/// Parses and validates a mapping; returns it with the recorded seed.
pub fn mapping_from_json(s: &str, group: &FuchsianGroup) -> Result<(GeodesicMapping, Option<u64>)> {
    let raw: MappingIn = serde_json::from_str(s)?;
    let complex = SimplicialSurface::from_faces(raw.complex.vertices, raw.complex.faces)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    if raw.complex.edges != complex.edges() {
        return Err(Error::InvalidInput(
            "edge list does not match the faces".into(),
        ));
    }
    if raw.lifts.len() != complex.n_vertices() {
        return Err(Error::InvalidInput(format!(
            "{} lifts for {} vertices",
            raw.lifts.len(),
            complex.n_vertices()
        )));
    }
    let lifts = raw
        .lifts
        .iter()
        .enumerate()
        .map(|(v, a)| {
            HPoint::from_array(*a, LIFT_TOL)
                .ok_or_else(|| Error::InvalidInput(format!("lift {v} is not on the hyperboloid")))
        })
        .collect::<Result<Vec<_>>>()?;
    let words = directed_values(&complex, raw.deck)?
        .iter()
        .map(|w| w.parse::<GroupWord>())
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let phi = GeodesicMapping::new(Arc::new(complex), lifts, words, group)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok((phi, raw.seed))
}

pub fn weights_to_json(complex: &SimplicialSurface, w: &WeightVector) -> Result<String> {
    Ok(serde_json::to_string_pretty(&DirectedMap {
        complex,
        value: |d| w.get(d),
    })?)
}

pub fn weights_from_json(s: &str, complex: &SimplicialSurface) -> Result<WeightVector> {
    let raw: HashMap<String, f64> = serde_json::from_str(s)?;
    let values = directed_values(complex, raw)?;
    WeightVector::new(complex, values).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn degeneration_to_json(path: &DegenerationPath, seed: Option<u64>) -> Result<String> {
    #[derive(Serialize)]
    struct Waypoint {
        t: f64,
        lift: [f64; 3],
        theta_min: f64,
    }
    #[derive(Serialize)]
    struct Out {
        seed: Option<u64>,
        vertex: usize,
        perturbed: bool,
        karcher: [f64; 3],
        target: [f64; 3],
        kernel: Vec<[f64; 3]>,
        waypoints: Vec<Waypoint>,
    }
    let out = Out {
        seed,
        vertex: path.vertex,
        perturbed: path.perturbed,
        karcher: path.karcher.to_array(),
        target: path.target.to_array(),
        kernel: lift_arrays(&path.kernel.boundary),
        waypoints: path
            .waypoints
            .iter()
            .map(|w| Waypoint {
                t: w.t,
                lift: w.lift.to_array(),
                theta_min: w.theta_min,
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&out)?)
}

/// One frame of a morph: the mapping at time `t` and its quality.
#[derive(Serialize)]
pub struct MorphFrame {
    pub t: f64,
    pub theta_min: f64,
    pub embedded: bool,
    pub lifts: Vec<[f64; 3]>,
}

impl MorphFrame {
    pub fn new(t: f64, phi: &GeodesicMapping) -> Self {
        MorphFrame {
            t,
            theta_min: phi.theta_min(),
            embedded: phi.is_embedded(),
            lifts: lift_arrays(phi.lifts()),
        }
    }
}

pub fn morph_to_json(frames: &[MorphFrame], seed: Option<u64>) -> Result<String> {
    #[derive(Serialize)]
    struct Out<'a> {
        seed: Option<u64>,
        samples: &'a [MorphFrame],
    }
    Ok(serde_json::to_string_pretty(&Out {
        seed,
        samples: frames,
    })?)
}
