//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so every line is printed; exits nonzero if
//! any criterion fails.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use hypertri_core::hypgeom::{
    angle, dist, exp_map, log_map, triangle_area, HIsometry, HPoint, HTangent,
};
use hypertri_core::kernel::{
    collinearity_residual, compute_kernel, degenerate, hausdorff, karcher_mean, move_vertex,
    radial_project, star_polygon, ConvexDisk, Quadrature, KARCHER_SUBDIVISION, KARCHER_TOL,
};
use hypertri_core::surface::{build_genus2, FuchsianGroup, FundamentalDomain};
use hypertri_core::triangulation::{
    build_base_triangulation, jitter, mapping_distance, GeodesicMapping,
};
use hypertri_core::tutte::{
    balance_residual, max_norm, mean_value_weights, morph_path, normalize, solve_balanced,
    weight_limit_probe, SolverOptions, WeightVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Setup {
    group: FuchsianGroup,
    domain: FundamentalDomain,
    base: GeodesicMapping,
    opts: SolverOptions,
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_point<R: Rng>(rng: &mut R, shift: f64) -> HPoint {
    HIsometry::random(rng, shift).apply(&HPoint::origin())
}

fn random_tangent<R: Rng>(rng: &mut R, base: HPoint, max_norm: f64) -> HTangent {
    let r = rng.gen_range(0.0..max_norm);
    let th = rng.gen_range(-PI..PI);
    HTangent::from_components(base, r * th.cos(), r * th.sin())
}

fn geometry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut roundtrip: f64 = 0.0;
    for _ in 0..1000 {
        let p = random_point(&mut rng, 2.0);
        let v = random_tangent(&mut rng, p, 5.0);
        let back = log_map(&p, &exp_map(&v));
        let diff = HTangent::new(p, back.vec - v.vec);
        roundtrip = roundtrip.max(diff.norm());
    }
    let (mut cosines, mut defect, mut equivariance): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let [a, b, c] = [0; 3].map(|_| random_point(&mut rng, 1.5));
        let (la, lb, lc) = (dist(&b, &c), dist(&c, &a), dist(&a, &b));
        let gamma = angle(&c, &a, &b).unwrap();
        cosines = cosines
            .max((lc.cosh() - (la.cosh() * lb.cosh() - la.sinh() * lb.sinh() * gamma.cos())).abs());
        // area from two sides and the included angle, against the defect
        let (ta, tb) = ((la / 2.0).tanh(), (lb / 2.0).tanh());
        let area = 2.0 * (ta * tb * gamma.sin()).atan2(1.0 - ta * tb * gamma.cos());
        defect = defect.max((area - triangle_area(&a, &b, &c)).abs());
        let g = HIsometry::random(&mut rng, 2.0);
        let (ga, gb, gc) = (g.apply(&a), g.apply(&b), g.apply(&c));
        equivariance = equivariance
            .max((dist(&ga, &gb) - lc).abs())
            .max((angle(&gc, &ga, &gb).unwrap() - gamma).abs());
    }
    let worst = roundtrip.max(cosines).max(defect).max(equivariance);
    check(
        worst < 1e-10,
        format!(
            "exp/log {roundtrip:.1e}, law of cosines {cosines:.1e}, angle defect {defect:.1e}, equivariance {equivariance:.1e}"
        ),
    )
}

fn surface(s: &Setup) -> Outcome {
    let relation = s.group.relation_residual();
    let angles = (0..8)
        .map(|k| (s.domain.interior_angle(k) - FRAC_PI_4).abs())
        .fold(0.0, f64::max);
    let cot = 1.0 / FRAC_PI_8.tan();
    let radius = (s.domain.circumradius.cosh() - cot * cot).abs();
    check(
        relation < 1e-9 && angles < 1e-10 && radius < 1e-10,
        format!("relation {relation:.1e}, angles {angles:.1e}, cosh R {radius:.1e}"),
    )
}

fn random_embedded(s: &Setup, rng: &mut ChaCha8Rng) -> Result<GeodesicMapping, String> {
    let w = WeightVector::random(s.base.complex(), rng, 10.0);
    let phi = solve_balanced(&w, &s.base, &s.opts).map_err(|e| e.to_string())?;
    Ok(jitter(&phi, rng, 0.3))
}

fn tutte(s: &Setup) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let inits = (0..10)
        .map(|_| random_embedded(s, &mut rng))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(k) = inits.iter().position(|m| !m.is_embedded()) {
        return Err(format!("init {k} is not embedded"));
    }
    let (mut spread, mut residual, mut theta): (f64, f64, f64) = (0.0, 0.0, f64::INFINITY);
    for wk in 0..5 {
        let w = WeightVector::random(s.base.complex(), &mut rng, 4.0);
        let nw = normalize(s.base.complex(), &w);
        let sols = inits
            .iter()
            .map(|init| solve_balanced(&w, init, &s.opts))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("weights {wk}: {e}"))?;
        for (i, a) in sols.iter().enumerate() {
            residual = residual.max(max_norm(&balance_residual(a, nw.weights())));
            theta = theta.min(a.theta_min());
            if !a.is_embedded() {
                return Err(format!("weights {wk}, init {i}: not embedded"));
            }
            for b in &sols[i + 1..] {
                spread = spread.max(mapping_distance(a, b).map_err(|e| e.to_string())?);
            }
        }
    }
    check(
        residual < 1e-10 && spread < 1e-6 && theta > 0.0,
        format!(
            "50 solves, residual {residual:.1e}, pairwise d_X {spread:.1e}, min theta {theta:.3e}"
        ),
    )
}

fn inclusion(s: &Setup) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    let mut raw: f64 = 0.0;
    for _ in 0..5 {
        let w = WeightVector::random(s.base.complex(), &mut rng, 4.0);
        let other = random_embedded(s, &mut rng)?;
        let a = solve_balanced(&w, &s.base, &s.opts).map_err(|e| e.to_string())?;
        let iw = normalize(s.base.complex(), &w).into_weights();
        let b = solve_balanced(&iw, &other, &s.opts).map_err(|e| e.to_string())?;
        worst = worst.max(mapping_distance(&a, &b).map_err(|e| e.to_string())?);
        // balanced for the raw weights too, up to the row scale
        let scale = w.values().iter().fold(0.0f64, |m, x| m.max(*x)) * 32.0;
        raw = raw.max(max_norm(&balance_residual(&a, &w)) / scale);
    }
    check(
        worst < 1e-8 && raw < 1e-10,
        format!("d_X(Phi(w), Phi(iota w)) {worst:.1e}, scaled raw residual {raw:.1e}"),
    )
}

fn floater(s: &Setup) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = vec![(s.base.clone(), jitter(&s.base, &mut rng, 0.3))];
    for _ in 0..10 {
        // solved from the base, not from the mapping itself
        cases.push((jitter(&s.base, &mut rng, 0.4), s.base.clone()));
    }
    let mut worst: f64 = 0.0;
    for (k, (phi, start)) in cases.iter().enumerate() {
        if !phi.is_embedded() {
            return Err(format!("case {k} is not embedded"));
        }
        let w = mean_value_weights(phi).map_err(|e| e.to_string())?;
        let back = solve_balanced(&w, start, &s.opts).map_err(|e| format!("case {k}: {e}"))?;
        worst = worst.max(mapping_distance(&back, phi).map_err(|e| e.to_string())?);
    }
    check(
        worst < 1e-7,
        format!("base + 10 perturbed, max d_X {worst:.1e}"),
    )
}

fn weight_limit(s: &Setup) -> Outcome {
    let face = s.base.complex().faces()[0];
    let rows = weight_limit_probe(&s.base, face, 10, &s.opts).map_err(|e| e.to_string())?;
    let theta: Vec<f64> = rows
        .iter()
        .map(|r| r.theta_min.unwrap_or(f64::NAN))
        .collect();
    let decreasing = theta.windows(2).all(|w| w[1] < w[0]);
    let last = *theta.last().unwrap();
    check(
        decreasing && last < 0.05,
        format!(
            "face {face:?}, theta {:.3e} -> {last:.3e}, strictly decreasing {decreasing}",
            theta[0]
        ),
    )
}

fn kernel(s: &Setup) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = s.base.complex().n_vertices();

    // convex stars: the base has several, plus seeded convex polygons
    let mut stars: Vec<_> = (0..n).map(|v| star_polygon(&s.base, v).unwrap()).collect();
    stars.retain(|st| {
        let b = &st.boundary;
        let m = b.len();
        (0..m).all(|k| {
            hypertri_core::hypgeom::orientation(&b[(k + m - 1) % m], &b[k], &b[(k + 1) % m])
                >= -1e-12
        })
    });
    let convex_count = stars.len();
    let mut haus: f64 = 0.0;
    for st in &stars {
        haus = haus.max(hausdorff(
            &compute_kernel(st).map_err(|e| e.to_string())?.boundary,
            &st.boundary,
        ));
    }

    let mut center: f64 = 0.0;
    for k in 3..=8 {
        let g = HIsometry::random(&mut rng, 1.0);
        let c = g.apply(&HPoint::origin());
        let d = ConvexDisk::regular(&c, k, rng.gen_range(0.4..1.5), rng.gen_range(0.0..PI));
        let b = karcher_mean(&d, KARCHER_TOL).map_err(|e| e.to_string())?;
        center = center.max(dist(&b, &c));
    }

    let (mut fd, mut boundary, mut collinear): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..10 {
        let v = rng.gen_range(0..n);
        let ker = compute_kernel(&star_polygon(&s.base, v).unwrap()).map_err(|e| e.to_string())?;
        let q = Quadrature::new(&ker, KARCHER_SUBDIVISION);
        let b = karcher_mean(&ker, KARCHER_TOL).map_err(|e| e.to_string())?;
        let x = hypertri_core::hypgeom::geodesic_eval(&b, &ker.boundary[0], 0.5);
        let grad = q.gradient(&x);
        let h = 1e-5;
        for _ in 0..3 {
            let e = random_tangent(&mut rng, x, 1.0);
            let e = e.scale(1.0 / e.norm());
            let diff =
                (q.energy(&exp_map(&e.scale(h))) - q.energy(&exp_map(&e.scale(-h)))) / (2.0 * h);
            fd = fd.max((diff - grad.dot(&e)).abs());
        }
        for _ in 0..20 {
            let k = rng.gen_range(0..ker.boundary.len());
            let t = rng.gen_range(0.05..1.0);
            let y = hypertri_core::hypgeom::geodesic_eval(&b, &ker.boundary[k], t);
            let z = radial_project(&ker, &b, &y).map_err(|e| e.to_string())?;
            boundary = boundary.max(ker.boundary_residual(&z));
            collinear = collinear.max(collinearity_residual(&b, &y, &z));
        }
    }
    check(
        haus < 1e-8 && center < 1e-6 && fd < 1e-5 && boundary < 1e-10 && collinear < 1e-10 && convex_count > 0,
        format!(
            "{convex_count} convex stars Hausdorff {haus:.1e}, regular Karcher {center:.1e}, gradient vs FD {fd:.1e}, projection boundary {boundary:.1e} collinearity {collinear:.1e}"
        ),
    )
}

fn keylemma(s: &Setup) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = s.base.complex().n_vertices();
    let mut final_theta: f64 = 0.0;
    let mut interior_theta = f64::INFINITY;
    let mut corner_gap: f64 = 0.0;
    for _ in 0..5 {
        let v = rng.gen_range(0..n);
        let path = degenerate(&s.base, v, 10, 8).map_err(|e| format!("vertex {v}: {e}"))?;
        for k in 0..path.waypoints.len() {
            let m = path.mapping(k);
            if (0..n).any(|u| u != v && m.lift(u).to_array() != s.base.lift(u).to_array()) {
                return Err(format!("vertex {v}: another lift moved"));
            }
            if k + 1 < path.waypoints.len() {
                interior_theta = interior_theta.min(path.waypoints[k].theta_min);
            }
        }
        final_theta = final_theta.max(path.waypoints.last().unwrap().theta_min);

        let moved = move_vertex(&s.base, v, &path.target).map_err(|e| e.to_string())?;
        let gap = moved
            .angle_report()
            .corners
            .iter()
            .flatten()
            .map(|a| a.min(PI - a))
            .fold(f64::INFINITY, f64::min);
        corner_gap = corner_gap.max(gap);
    }
    check(
        interior_theta > 0.0 && final_theta < 1e-3 && corner_gap < 1e-6,
        format!(
            "5 vertices, min theta for t<1 {interior_theta:.3e}, final theta {final_theta:.1e}, boundary corner off 0/pi by {corner_gap:.1e}"
        ),
    )
}

fn contractibility(s: &Setup) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = random_embedded(s, &mut rng)?;
    let b = random_embedded(s, &mut rng)?;
    let frames = morph_path(&a, &b, 50, &s.opts).map_err(|e| e.to_string())?;
    let theta = frames
        .iter()
        .map(|(_, m)| m.theta_min())
        .fold(f64::INFINITY, f64::min);
    let embedded = frames.iter().all(|(_, m)| m.is_embedded());
    let start = mapping_distance(&frames[0].1, &a).map_err(|e| e.to_string())?;
    let end = mapping_distance(&frames[49].1, &b).map_err(|e| e.to_string())?;
    check(
        embedded && theta > 0.0 && start < 1e-7 && end < 1e-7,
        format!("50 samples embedded {embedded}, min theta {theta:.3e}, endpoints {start:.1e} / {end:.1e}"),
    )
}

fn run_all(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let bin = env!("CARGO_BIN_EXE_hypertri");
    let m = dir.join("mapping.json");
    let m = m.to_str().unwrap();
    let r = dir.join("random/mapping.json");
    let r = r.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["surface"],
        vec!["base"],
        vec!["--out", "random", "balance", "--random", "4"],
        vec!["balance", "--uniform", "--init", m],
        vec!["roundtrip", r],
        vec!["morph", m, r, "--samples", "6"],
        vec!["degenerate", m, "--vertex", "0", "--steps", "5"],
        vec!["weightlimit", "--face", "0,7,6", "--levels", "6"],
        vec!["render", r, "random.svg", "--ghosts", "--highlight", "3"],
    ];
    let mut stdout = Vec::new();
    for args in &commands {
        let mut cmd = Command::new(bin);
        cmd.current_dir(dir).args(["--seed", "17"]);
        if args[0] != "--out" {
            cmd.args(["--out", "."]);
        }
        let out = cmd.args(args).output().map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {:?}", out.status.code()));
        }
        stdout.extend(out.stdout);
    }
    let mut files = vec![("stdout".to_string(), stdout)];
    for sub in ["", "random"] {
        let mut names: Vec<_> = std::fs::read_dir(dir.join(sub))
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok())
            .filter(|e| e.path().is_file())
            .map(|e| e.file_name().into_string().unwrap())
            .collect();
        names.sort();
        for name in names {
            let bytes = std::fs::read(dir.join(sub).join(&name)).map_err(|e| e.to_string())?;
            files.push((format!("{sub}/{name}"), bytes));
        }
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let fa = run_all(a.path())?;
    let fb = run_all(b.path())?;
    let names: Vec<&str> = fa.iter().map(|(n, _)| n.as_str()).collect();
    if names != fb.iter().map(|(n, _)| n.as_str()).collect::<Vec<_>>() {
        return Err("different file sets".into());
    }
    let differing: Vec<&str> = fa
        .iter()
        .zip(&fb)
        .filter(|(x, y)| x.1 != y.1)
        .map(|(x, _)| x.0.as_str())
        .collect();
    check(
        differing.is_empty(),
        format!(
            "9 commands, {} artifacts byte-identical{}",
            fa.len(),
            if differing.is_empty() {
                String::new()
            } else {
                format!(", differ: {differing:?}")
            }
        ),
    )
}

fn main() {
    let (group, domain) = build_genus2();
    let (_, base) = build_base_triangulation(&group, &domain);
    let setup = Setup {
        group,
        domain,
        base,
        opts: SolverOptions::default(),
    };
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("geometry kernel", Box::new(geometry)),
        ("surface group", Box::new(|| surface(&setup))),
        ("balanced map uniqueness", Box::new(|| tutte(&setup))),
        ("weight normalization", Box::new(|| inclusion(&setup))),
        ("mean value roundtrip", Box::new(|| floater(&setup))),
        ("weight limit trend", Box::new(|| weight_limit(&setup))),
        ("kernel and Karcher mean", Box::new(|| kernel(&setup))),
        ("degenerating path", Box::new(|| keylemma(&setup))),
        ("weight-space morph", Box::new(|| contractibility(&setup))),
        ("CLI determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} ({secs:.1}s)", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
