//! Weights on directed edges, the balanced-map solver, mean value weights
//! and weight-space morphs.
//!
//! A mapping is `w`-balanced when `sum_j w_ij v_ij = 0` at every vertex,
//! where `v_ij = log(q_i, g_ij q_j)`. For every positive weight there is a
//! unique balanced mapping in the homotopy class and it is an embedding; the
//! solver finds it by damped simultaneous relaxation on normalized weights.
//! Mean value weights are a right inverse: a mapping is balanced for its
//! own mean value weights.

use std::io::Write;

use rand::Rng;

use crate::error::{Error, Result};
use crate::hypgeom::{exp_map, HTangent, DEGENERATE_LENGTH};
use crate::triangulation::{mapping_distance, GeodesicMapping, SimplicialSurface};

/// Positive weights indexed by directed edge.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<f64>);

/// Weights whose outgoing entries sum to 1 at every vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedWeights(WeightVector);

impl WeightVector {
    pub fn new(complex: &SimplicialSurface, values: Vec<f64>) -> Result<Self> {
        if values.len() != complex.n_directed() {
            return Err(Error::WeightLength {
                got: values.len(),
                expected: complex.n_directed(),
            });
        }
        if let Some((edge, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0 && w.is_finite()))
        {
            return Err(Error::NonPositiveWeight { edge, value });
        }
        Ok(WeightVector(values))
    }

    pub fn uniform(complex: &SimplicialSurface) -> Self {
        WeightVector(vec![1.0; complex.n_directed()])
    }

    /// Log-uniform random weights in `[1/spread, spread]`.
    pub fn random<R: Rng>(complex: &SimplicialSurface, rng: &mut R, spread: f64) -> Self {
        let s = spread.ln();
        WeightVector(
            (0..complex.n_directed())
                .map(|_| rng.gen_range(-s..=s).exp())
                .collect(),
        )
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, d: usize) -> f64 {
        self.0[d]
    }

    pub fn scaled(&self, s: f64) -> Self {
        WeightVector(self.0.iter().map(|w| w * s).collect())
    }

    /// `(1 - t) self + t other`; stays positive for `t` in `[0, 1]`.
    pub fn lerp(&self, other: &WeightVector, t: f64) -> Self {
        WeightVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        )
    }
}

impl NormalizedWeights {
    pub fn weights(&self) -> &WeightVector {
        &self.0
    }

    pub fn into_weights(self) -> WeightVector {
        self.0
    }
}

/// Divides every weight by the sum of the weights leaving its tail vertex.
pub fn normalize(complex: &SimplicialSurface, w: &WeightVector) -> NormalizedWeights {
    let mut out = w.0.clone();
    for v in 0..complex.n_vertices() {
        let ring = complex.ring(v);
        let total: f64 = ring.iter().map(|&d| w.0[d]).sum();
        for &d in ring {
            out[d] = w.0[d] / total;
        }
    }
    NormalizedWeights(WeightVector(out))
}

/// `r_i = sum_j w_ij v_ij` for every vertex, with the weights as given.
pub fn balance_residual(phi: &GeodesicMapping, w: &WeightVector) -> Vec<HTangent> {
    let complex = phi.complex();
    (0..complex.n_vertices())
        .map(|i| {
            complex
                .ring(i)
                .iter()
                .fold(HTangent::zero(*phi.lift(i)), |acc, &d| {
                    acc.add(&phi.edge_vector(d).scale(w.0[d]))
                })
        })
        .collect()
}

pub fn max_norm(r: &[HTangent]) -> f64 {
    r.iter().map(HTangent::norm).fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Record one [`IterationRecord`] per trial step.
    pub record_log: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-10,
            max_iters: 200_000,
            record_log: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub residual: f64,
    pub tau: f64,
    pub accepted: bool,
}

#[derive(Clone, Debug, Default)]
pub struct SolveReport {
    pub iterations: usize,
    pub residual: f64,
    pub log: Vec<IterationRecord>,
}

impl SolveReport {
    /// Writes the iteration log as `iteration,residual,tau,accepted` CSV.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "iteration,residual,tau,accepted")?;
        for r in &self.log {
            writeln!(
                out,
                "{},{:e},{},{}",
                r.iteration, r.residual, r.tau, r.accepted as u8
            )?;
        }
        Ok(())
    }
}

const TAU_GROWTH_STREAK: usize = 5;
const TAU_FLOOR: f64 = 1e-16;

/// The unique `w`-balanced mapping homotopic to `init`.
pub fn solve_balanced(
    w: &WeightVector,
    init: &GeodesicMapping,
    opts: &SolverOptions,
) -> Result<GeodesicMapping> {
    solve_balanced_report(w, init, opts).map(|(m, _)| m)
}

/// [`solve_balanced`] plus the iteration report.
///
/// Every vertex moves simultaneously by `exp(tau r_i)` with `r_i` computed
/// from normalized weights. A trial step is accepted only if the largest
/// residual norm strictly decreases; otherwise `tau` halves. After five
/// consecutive accepted steps `tau` grows by 1.5, capped at 1.
pub fn solve_balanced_report(
    w: &WeightVector,
    init: &GeodesicMapping,
    opts: &SolverOptions,
) -> Result<(GeodesicMapping, SolveReport)> {
    let complex = init.complex();
    let nw = normalize(complex, w).into_weights();
    let mut phi = init.clone();
    let mut r = balance_residual(&phi, &nw);
    let mut res = max_norm(&r);
    let mut tau = 1.0;
    let mut streak = 0;
    let mut report = SolveReport::default();

    let mut iteration = 0;
    while res >= opts.tol {
        if iteration >= opts.max_iters || tau < TAU_FLOOR {
            return Err(Error::NotConverged {
                iterations: iteration,
                residual: res,
            });
        }
        iteration += 1;
        let lifts = r.iter().map(|ri| exp_map(&ri.scale(tau))).collect();
        let trial = phi.with_lifts(lifts);
        let r_trial = balance_residual(&trial, &nw);
        let res_trial = max_norm(&r_trial);
        let accepted = res_trial < res;
        if accepted {
            phi = trial;
            r = r_trial;
            res = res_trial;
            streak += 1;
            if streak == TAU_GROWTH_STREAK {
                tau = (tau * 1.5).min(1.0);
                streak = 0;
            }
        } else {
            tau *= 0.5;
            streak = 0;
        }
        if opts.record_log {
            report.log.push(IterationRecord {
                iteration,
                residual: res,
                tau,
                accepted,
            });
        }
    }
    report.iterations = iteration;
    report.residual = res;
    if !phi.is_embedded() {
        return Err(Error::NonEmbedding {
            residual: res,
            theta_min: phi.theta_min(),
        });
    }
    Ok((phi, report))
}

/// Mean value weights `(tan(alpha/2) + tan(beta/2)) / |v_ij|`, where alpha
/// and beta are the corner angles at `i` on either side of edge `ij`.
pub fn mean_value_weights(phi: &GeodesicMapping) -> Result<WeightVector> {
    let complex = phi.complex();
    let values = (0..complex.n_directed())
        .map(|d| {
            let (i, j) = complex.directed(d);
            let vij = phi.edge_vector(d);
            let len = vij.norm();
            if len <= DEGENERATE_LENGTH {
                return Err(Error::OnBoundary(format!("edge {i}-{j} has zero length")));
            }
            // left corner: from v_ij to v_ik; right corner: from v_il to v_ij
            let k = complex.apex(d);
            let l = complex.apex(SimplicialSurface::twin(d));
            let vik = phi.edge_vector(complex.directed_index(i, k).expect("face edge"));
            let vil = phi.edge_vector(complex.directed_index(i, l).expect("face edge"));
            let alpha = vij.signed_angle_to(&vik);
            let beta = vil.signed_angle_to(&vij);
            for a in [alpha, beta] {
                if !(a > 0.0 && a < std::f64::consts::PI)
                    || vik.norm() <= DEGENERATE_LENGTH
                    || vil.norm() <= DEGENERATE_LENGTH
                {
                    return Err(Error::OnBoundary(format!(
                        "corner at {i} next to edge {i}-{j} is degenerate"
                    )));
                }
            }
            Ok(((alpha / 2.0).tan() + (beta / 2.0).tan()) / len)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightVector(values))
}

/// `d_X(Phi(Psi(phi)), phi)`; zero up to solver tolerance for embeddings.
pub fn roundtrip_check(phi: &GeodesicMapping, opts: &SolverOptions) -> Result<f64> {
    let w = mean_value_weights(phi)?;
    let back = solve_balanced(&w, phi, opts)?;
    mapping_distance(&back, phi)
}

fn morph_weights(
    phi0: &GeodesicMapping,
    phi1: &GeodesicMapping,
) -> Result<(WeightVector, WeightVector)> {
    if !phi0.same_class(phi1) {
        return Err(Error::DifferentHomotopyClass);
    }
    let c = phi0.complex();
    Ok((
        normalize(c, &mean_value_weights(phi0)?).into_weights(),
        normalize(c, &mean_value_weights(phi1)?).into_weights(),
    ))
}

/// The balanced mapping for the interpolated normalized mean value weights
/// of `phi0` and `phi1`.
pub fn morph(
    phi0: &GeodesicMapping,
    phi1: &GeodesicMapping,
    t: f64,
    opts: &SolverOptions,
) -> Result<GeodesicMapping> {
    let (w0, w1) = morph_weights(phi0, phi1)?;
    let init = if t < 0.5 { phi0 } else { phi1 };
    solve_balanced(&w0.lerp(&w1, t), init, opts)
}

/// `samples` evenly spaced morph frames from `t = 0` to `t = 1`, each solve
/// warm-started from the previous frame.
pub fn morph_path(
    phi0: &GeodesicMapping,
    phi1: &GeodesicMapping,
    samples: usize,
    opts: &SolverOptions,
) -> Result<Vec<(f64, GeodesicMapping)>> {
    let (w0, w1) = morph_weights(phi0, phi1)?;
    let mut out: Vec<(f64, GeodesicMapping)> = Vec::with_capacity(samples);
    for s in 0..samples {
        let t = if samples > 1 {
            s as f64 / (samples - 1) as f64
        } else {
            0.0
        };
        let init = out.last().map(|(_, m)| m).unwrap_or(phi0);
        out.push((t, solve_balanced(&w0.lerp(&w1, t), init, opts)?));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRow {
    pub level: usize,
    pub delta: f64,
    pub theta_min: Option<f64>,
    pub residual: f64,
    /// False when the solve converged but the result failed the embedding
    /// check, which happens once `theta_min` reaches rounding level.
    pub embedded: bool,
}

/// Weights concentrated on two edges of a face: at the face's first vertex
/// `i`, `w_ij = w_ik = (1 - delta)/2` and the remaining `delta` is spread
/// evenly; every other vertex has uniform normalized weights.
pub fn concentrated_weights(
    complex: &SimplicialSurface,
    face: [usize; 3],
    delta: f64,
) -> Result<WeightVector> {
    let [i, j, k] = face;
    if complex.find_face(face).is_none() && complex.find_face([i, k, j]).is_none() {
        return Err(Error::InvalidInput(format!("{face:?} is not a face")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta {delta} outside (0, 1)")));
    }
    let mut values = vec![0.0; complex.n_directed()];
    for v in 0..complex.n_vertices() {
        let ring = complex.ring(v);
        for &d in ring {
            values[d] = if v != i {
                1.0 / ring.len() as f64
            } else {
                let head = complex.directed(d).1;
                if head == j || head == k {
                    (1.0 - delta) / 2.0
                } else {
                    delta / (ring.len() - 2) as f64
                }
            };
        }
    }
    WeightVector::new(complex, values)
}

/// Minimum angle of the balanced mapping as the weight at one vertex of
/// `face` concentrates on its two face edges: `delta_k = 2^-k`,
/// `k = 1..=levels`. Each level is warm-started from the previous solution.
/// A level whose solve does not converge gets `theta_min = None`.
pub fn weight_limit_probe(
    base: &GeodesicMapping,
    face: [usize; 3],
    levels: usize,
    opts: &SolverOptions,
) -> Result<Vec<ProbeRow>> {
    let complex = base.complex();
    let mut init = base.clone();
    let mut rows = Vec::with_capacity(levels);
    for level in 1..=levels {
        let delta = 0.5f64.powi(level as i32);
        let w = concentrated_weights(complex, face, delta)?;
        match solve_balanced_report(&w, &init, opts) {
            Ok((phi, report)) => {
                rows.push(ProbeRow {
                    level,
                    delta,
                    theta_min: Some(phi.theta_min()),
                    residual: report.residual,
                    embedded: true,
                });
                init = phi;
            }
            Err(Error::NonEmbedding {
                residual,
                theta_min,
            }) => rows.push(ProbeRow {
                level,
                delta,
                theta_min: Some(theta_min),
                residual,
                embedded: false,
            }),
            Err(Error::NotConverged { residual, .. }) => rows.push(ProbeRow {
                level,
                delta,
                theta_min: None,
                residual,
                embedded: false,
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_genus2;
    use crate::triangulation::build_base_triangulation;

    fn base() -> GeodesicMapping {
        let (g, d) = build_genus2();
        build_base_triangulation(&g, &d).1
    }

    #[test]
    fn normalize_examples() {
        let phi = base();
        let c = phi.complex();
        let u = normalize(c, &WeightVector::uniform(c));
        let v6 = (0..c.n_vertices()).find(|&v| c.degree(v) == 6).unwrap();
        for &d in c.ring(v6) {
            assert!((u.weights().get(d) - 1.0 / 6.0).abs() < 1e-15);
        }
        // idempotent
        let twice = normalize(c, u.weights());
        for (x, y) in twice.weights().values().iter().zip(u.weights().values()) {
            assert!((x - y).abs() < 1e-15);
        }
        // per-vertex scaling invariance
        let mut vals = WeightVector::uniform(c).values().to_vec();
        for &d in c.ring(3) {
            vals[d] *= 7.0;
        }
        let scaled = WeightVector::new(c, vals).unwrap();
        let a = normalize(c, &scaled);
        for (x, y) in a.weights().values().iter().zip(u.weights().values()) {
            assert!((x - y).abs() < 1e-15);
        }
        for v in 0..c.n_vertices() {
            let s: f64 = c.ring(v).iter().map(|&d| a.weights().get(d)).sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_validation() {
        let phi = base();
        let c = phi.complex();
        let mut vals = vec![1.0; c.n_directed()];
        vals[5] = 0.0;
        assert!(matches!(
            WeightVector::new(c, vals.clone()),
            Err(Error::NonPositiveWeight { edge: 5, .. })
        ));
        vals[5] = -2.0;
        assert!(WeightVector::new(c, vals).is_err());
        assert!(matches!(
            WeightVector::new(c, vec![1.0; 3]),
            Err(Error::WeightLength { .. })
        ));
    }

    #[test]
    fn residual_is_linear_in_weights() {
        let phi = base();
        let c = phi.complex();
        let w = WeightVector::uniform(c);
        let r1 = balance_residual(&phi, &w);
        let r2 = balance_residual(&phi, &w.scaled(2.0));
        for (a, b) in r1.iter().zip(&r2) {
            assert_eq!(a.vec * 2.0, b.vec);
        }
    }

    #[test]
    fn center_vertex_is_balanced_by_symmetry() {
        // vertex 0 is the octagon center; its star is invariant under the
        // rotation by pi, and uniform weights cancel in pairs
        let phi = base();
        let r = balance_residual(&phi, &WeightVector::uniform(phi.complex()));
        assert!(r[0].norm() < 1e-12, "{}", r[0].norm());
    }

    #[test]
    fn mvc_right_angle_example() {
        let alpha = std::f64::consts::FRAC_PI_2;
        let l = 0.8;
        let w = ((alpha / 2.0).tan() + (alpha / 2.0).tan()) / l;
        assert!((w - 2.0 / l).abs() < 1e-15);
    }

    #[test]
    fn mvc_positive_and_balancing_on_base() {
        let phi = base();
        let w = mean_value_weights(&phi).unwrap();
        assert!(w.values().iter().all(|&x| x > 0.0));
        let r = balance_residual(&phi, &w);
        assert!(max_norm(&r) < 1e-12, "{}", max_norm(&r));
    }

    #[test]
    fn mvc_rejects_degenerate_mapping() {
        let phi = base();
        let c = phi.complex();
        let d = c.ring(0)[0];
        let collapsed = phi.with_lift(0, phi.head_position(d));
        assert!(matches!(
            mean_value_weights(&collapsed),
            Err(Error::OnBoundary(_))
        ));
    }

    #[test]
    fn concentrated_weights_rows() {
        let phi = base();
        let c = phi.complex();
        let face = c.faces()[0];
        let w = concentrated_weights(c, face, 0.25).unwrap();
        let n = normalize(c, &w);
        for (a, b) in w.values().iter().zip(n.weights().values()) {
            assert!((a - b).abs() < 1e-15);
        }
        let dj = c.directed_index(face[0], face[1]).unwrap();
        let dk = c.directed_index(face[0], face[2]).unwrap();
        assert!((w.get(dj) + w.get(dk) - 0.75).abs() < 1e-15);
        assert!(
            concentrated_weights(c, [0, 1, 2], 0.5).is_err() || c.find_face([0, 1, 2]).is_some()
        );
    }
}
