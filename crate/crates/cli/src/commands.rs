use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use hypertri_core::kernel::{compute_kernel, degenerate, star_polygon};
use hypertri_core::surface::{build_genus2, FuchsianGroup, FundamentalDomain};
use hypertri_core::triangulation::{build_base_triangulation, mapping_distance, GeodesicMapping};
use hypertri_core::tutte::{
    mean_value_weights, morph_path, solve_balanced, solve_balanced_report, weight_limit_probe,
    SolverOptions, WeightVector,
};
use hypertri_core::{io, render, Error};
use rand::SeedableRng;
use serde::Serialize;

use crate::{BalanceArgs, Cli, Command, Global};

pub const EXIT_DIAGNOSTIC: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;
pub const EXIT_BAD_INPUT: u8 = 3;

/// Roundtrip distances above this fail the check.
const ROUNDTRIP_TOL: f64 = 1e-7;

pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged { .. } | Error::KarcherStalled { .. } => EXIT_NOT_CONVERGED,
            Error::InvalidInput(_)
            | Error::Json(_)
            | Error::InvalidWord(_)
            | Error::InvalidComplex(_)
            | Error::InvalidMapping(_)
            | Error::NonPositiveWeight { .. }
            | Error::WeightLength { .. }
            | Error::DifferentHomotopyClass => EXIT_BAD_INPUT,
            _ => EXIT_DIAGNOSTIC,
        };
        Failure {
            code,
            error: e.into(),
        }
    }
}

fn fail(code: u8, error: anyhow::Error) -> Failure {
    Failure { code, error }
}

type CmdResult = Result<(), Failure>;

struct Ctx<'a> {
    g: &'a Global,
    group: FuchsianGroup,
    domain: FundamentalDomain,
}

impl Ctx<'_> {
    fn solver(&self) -> SolverOptions {
        SolverOptions {
            tol: self.g.tol.unwrap_or(1e-10),
            max_iters: self.g.max_iters,
            record_log: true,
        }
    }

    fn path(&self, name: impl AsRef<Path>) -> PathBuf {
        self.g.out.join(name)
    }

    fn write(&self, name: impl AsRef<Path>, contents: &str) -> CmdResult {
        let path = self.path(name);
        fs::create_dir_all(&self.g.out)
            .and_then(|_| fs::write(&path, contents))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(|e| fail(EXIT_DIAGNOSTIC, e))?;
        if self.g.verbose {
            eprintln!("wrote {}", path.display());
        }
        Ok(())
    }

    fn read(&self, path: &Path) -> Result<String, Failure> {
        fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(|e| fail(EXIT_BAD_INPUT, e))
    }

    fn load_mapping(&self, path: &Path) -> Result<GeodesicMapping, Failure> {
        let text = self.read(path)?;
        let (phi, _) = io::mapping_from_json(&text, &self.group).map_err(|e| {
            fail(
                EXIT_BAD_INPUT,
                anyhow!(e).context(format!("{}", path.display())),
            )
        })?;
        Ok(phi)
    }

    fn base(&self) -> GeodesicMapping {
        build_base_triangulation(&self.group, &self.domain).1
    }

    fn seed(&self) -> Option<u64> {
        Some(self.g.seed)
    }
}

pub fn run(cli: &Cli) -> CmdResult {
    let (group, domain) = build_genus2();
    let ctx = Ctx {
        g: &cli.global,
        group,
        domain,
    };
    match &cli.command {
        Command::Surface => surface(&ctx),
        Command::Base => base(&ctx),
        Command::Balance(args) => balance(&ctx, args),
        Command::Roundtrip { mapping } => roundtrip(&ctx, mapping),
        Command::Morph { a, b, samples } => morph(&ctx, a, b, *samples),
        Command::Degenerate {
            mapping,
            vertex,
            steps,
        } => degenerate_cmd(&ctx, mapping, *vertex, *steps),
        Command::Weightlimit { face, levels, init } => {
            weightlimit(&ctx, face, *levels, init.as_deref())
        }
        Command::Render {
            mapping,
            svg,
            ghosts,
            highlight,
        } => render_cmd(&ctx, mapping, svg, *ghosts, *highlight),
    }
}

fn surface(ctx: &Ctx) -> CmdResult {
    let tol = ctx.g.tol.unwrap_or(1e-9);
    let d = &ctx.domain;
    let cot = 1.0 / (std::f64::consts::PI / 8.0).tan();
    let relation = ctx.group.relation_residual();
    let radius = (d.circumradius.cosh() - cot * cot).abs();
    let angles = (0..8)
        .map(|k| (d.interior_angle(k) - std::f64::consts::FRAC_PI_4).abs())
        .fold(0.0, f64::max);
    let pairing = (0..8)
        .map(|k| {
            // the generator for side k carries side j onto it, reversed
            let g = ctx.group.generator(FundamentalDomain::side_letter(k));
            let j = FundamentalDomain::paired_side(k);
            let ends = [g.apply(&d.vertices[j]), g.apply(&d.vertices[(j + 1) % 8])];
            let targets = [d.vertices[(k + 1) % 8], d.vertices[k]];
            ends.iter()
                .zip(&targets)
                .map(|(a, b)| hypertri_core::hypgeom::dist(a, b))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    println!("R={:.4} ({:.12})", d.circumradius, d.circumradius);
    println!("r={:.4} ({:.12})", d.inradius, d.inradius);
    println!("relation abABcdCD residual {relation:.3e}");
    println!("cosh R - cot^2(pi/8) {radius:.3e}");
    println!("interior angle - pi/4 {angles:.3e}");
    println!("side pairing residual {pairing:.3e}");
    let failed: Vec<&str> = [
        ("relation", relation),
        ("circumradius", radius),
        ("angles", angles),
        ("pairing", pairing),
    ]
    .iter()
    .filter(|(_, r)| !(*r < tol))
    .map(|(n, _)| *n)
    .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(fail(
            EXIT_DIAGNOSTIC,
            anyhow!("residuals above {tol:e}: {}", failed.join(", ")),
        ))
    }
}

fn base(ctx: &Ctx) -> CmdResult {
    let phi = ctx.base();
    let c = phi.complex();
    println!(
        "vertices {} edges {} faces {} euler {}",
        c.n_vertices(),
        c.edges().len(),
        c.faces().len(),
        c.euler_characteristic()
    );
    println!("theta_min {:.10}", phi.theta_min());
    ctx.write("mapping.json", &io::mapping_to_json(&phi, ctx.seed())?)
}

fn balance(ctx: &Ctx, args: &BalanceArgs) -> CmdResult {
    let init = match &args.init {
        Some(p) => ctx.load_mapping(p)?,
        None => ctx.base(),
    };
    let complex = init.complex();
    let w = if let Some(p) = &args.weights {
        let text = ctx.read(p)?;
        io::weights_from_json(&text, complex)?
    } else if let Some(s) = args.random {
        if !(s >= 1.0 && s.is_finite()) {
            return Err(fail(
                EXIT_BAD_INPUT,
                anyhow!("--random needs a spread >= 1"),
            ));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.g.seed);
        WeightVector::random(complex, &mut rng, s)
    } else {
        WeightVector::uniform(complex)
    };
    let (phi, report) = solve_balanced_report(&w, &init, &ctx.solver())?;
    println!(
        "converged after {} iterations, residual {:.3e}",
        report.iterations, report.residual
    );
    println!("theta_min {:.10}", phi.theta_min());
    let mut csv = Vec::new();
    report.write_csv(&mut csv).expect("in-memory write");
    ctx.write("iterations.csv", &String::from_utf8(csv).expect("ascii"))?;
    ctx.write("weights.json", &io::weights_to_json(complex, &w)?)?;
    ctx.write("mapping.json", &io::mapping_to_json(&phi, ctx.seed())?)
}

#[derive(Serialize)]
struct RoundtripOut {
    seed: Option<u64>,
    distance: f64,
    theta_min: f64,
}

fn roundtrip(ctx: &Ctx, path: &Path) -> CmdResult {
    let phi = ctx.load_mapping(path)?;
    let w = mean_value_weights(&phi)?;
    let back = solve_balanced(&w, &phi, &ctx.solver())?;
    let distance = mapping_distance(&back, &phi)?;
    println!("roundtrip distance {distance:.3e}");
    let out = RoundtripOut {
        seed: ctx.seed(),
        distance,
        theta_min: back.theta_min(),
    };
    ctx.write(
        "roundtrip.json",
        &serde_json::to_string_pretty(&out).map_err(|e| fail(EXIT_DIAGNOSTIC, e.into()))?,
    )?;
    if distance < ROUNDTRIP_TOL {
        Ok(())
    } else {
        Err(fail(
            EXIT_DIAGNOSTIC,
            anyhow!("roundtrip distance {distance:e} above {ROUNDTRIP_TOL:e}"),
        ))
    }
}

fn morph(ctx: &Ctx, a: &Path, b: &Path, samples: usize) -> CmdResult {
    if samples < 2 {
        return Err(fail(
            EXIT_BAD_INPUT,
            anyhow!("--samples must be at least 2"),
        ));
    }
    let phi0 = ctx.load_mapping(a)?;
    let phi1 = ctx.load_mapping(b)?;
    let frames = morph_path(&phi0, &phi1, samples, &ctx.solver())?;
    let frames: Vec<io::MorphFrame> = frames
        .iter()
        .map(|(t, m)| io::MorphFrame::new(*t, m))
        .collect();
    let worst = frames
        .iter()
        .map(|f| f.theta_min)
        .fold(f64::INFINITY, f64::min);
    println!("{} samples, smallest theta_min {worst:.6e}", frames.len());
    ctx.write("morph.json", &io::morph_to_json(&frames, ctx.seed())?)?;
    match frames.iter().find(|f| !f.embedded) {
        None => Ok(()),
        Some(f) => Err(fail(
            EXIT_DIAGNOSTIC,
            anyhow!("sample t={} is not embedded", f.t),
        )),
    }
}

fn degenerate_cmd(ctx: &Ctx, path: &Path, vertex: usize, steps: usize) -> CmdResult {
    let phi = ctx.load_mapping(path)?;
    if vertex >= phi.complex().n_vertices() {
        return Err(fail(EXIT_BAD_INPUT, anyhow!("no vertex {vertex}")));
    }
    let p = degenerate(&phi, vertex, steps, ctx.g.seed)?;
    for w in &p.waypoints {
        println!("t={:.4} theta_min={:.6e}", w.t, w.theta_min);
    }
    if p.perturbed {
        println!("vertex started on the Karcher mean and was perturbed");
    }
    ctx.write(
        "degeneration.json",
        &io::degeneration_to_json(&p, ctx.seed())?,
    )
}

fn weightlimit(ctx: &Ctx, face: &[usize], levels: usize, init: Option<&Path>) -> CmdResult {
    let face: [usize; 3] = face
        .try_into()
        .map_err(|_| fail(EXIT_BAD_INPUT, anyhow!("--face needs three vertices i,j,k")))?;
    let phi = match init {
        Some(p) => ctx.load_mapping(p)?,
        None => ctx.base(),
    };
    let rows = weight_limit_probe(&phi, face, levels, &ctx.solver())?;
    let mut csv = String::from("level,delta,theta_min,residual,embedded\n");
    for r in &rows {
        let theta = r
            .theta_min
            .map_or(String::from("nan"), |t| format!("{t:e}"));
        csv.push_str(&format!(
            "{},{:e},{},{:e},{}\n",
            r.level, r.delta, theta, r.residual, r.embedded as u8
        ));
        println!("delta=2^-{:<3} theta_min={theta}", r.level);
    }
    ctx.write("weightlimit.csv", &csv)
}

fn render_cmd(
    ctx: &Ctx,
    path: &Path,
    svg: &Path,
    ghosts: bool,
    highlight: Option<usize>,
) -> CmdResult {
    let phi = ctx.load_mapping(path)?;
    let overlay = match highlight {
        Some(v) if v >= phi.complex().n_vertices() => {
            return Err(fail(EXIT_BAD_INPUT, anyhow!("no vertex {v}")));
        }
        Some(v) => Some(compute_kernel(&star_polygon(&phi, v)?)?.boundary),
        None => None,
    };
    let opts = render::RenderOptions {
        ghosts,
        highlight,
        overlay,
        ..Default::default()
    };
    ctx.write(
        svg,
        &render::render_svg(&phi, &ctx.group, &ctx.domain, &opts)?,
    )
}
