//! SVG drawings in the Poincare disk.
//!
//! Each edge is drawn once, as the circular arc of its geodesic, translated
//! into the fundamental octagon by the deck transformation that brings its
//! midpoint there.

use std::fmt::Write;

use crate::error::Result;
use crate::hypgeom::{geodesic_eval, to_poincare, HIsometry, HPoint};
use crate::surface::{reduce_to_domain, FuchsianGroup, FundamentalDomain, Letter};
use crate::triangulation::GeodesicMapping;

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Width and height in pixels.
    pub size: u32,
    /// Also draw the images of every edge under the eight generators.
    pub ghosts: bool,
    /// Vertex to mark with a dot.
    pub highlight: Option<usize>,
    /// Closed polygon to outline, in the frame of the highlighted vertex.
    pub overlay: Option<Vec<HPoint>>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            size: 800,
            ghosts: false,
            highlight: None,
            overlay: None,
        }
    }
}

/// A geodesic segment in the disk: a straight chord through the origin or
/// an arc of a circle orthogonal to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiskArc {
    Line {
        from: (f64, f64),
        to: (f64, f64),
    },
    Circle {
        from: (f64, f64),
        to: (f64, f64),
        center: (f64, f64),
        radius: f64,
        /// Counter-clockwise about `center` from `from` to `to`.
        ccw: bool,
    },
}

pub fn disk_arc(p: &HPoint, q: &HPoint) -> DiskArc {
    let a = to_poincare(p);
    let b = to_poincare(q);
    let det = a.0 * b.1 - a.1 * b.0;
    if det.abs() < 1e-9 {
        return DiskArc::Line { from: a, to: b };
    }
    // c.a = (|a|^2 + 1)/2 and c.b = (|b|^2 + 1)/2
    let ra = (a.0 * a.0 + a.1 * a.1 + 1.0) / 2.0;
    let rb = (b.0 * b.0 + b.1 * b.1 + 1.0) / 2.0;
    let c = ((ra * b.1 - rb * a.1) / det, (a.0 * rb - b.0 * ra) / det);
    let radius = (c.0 * c.0 + c.1 * c.1 - 1.0).sqrt();
    let cross = (a.0 - c.0) * (b.1 - c.1) - (a.1 - c.1) * (b.0 - c.0);
    DiskArc::Circle {
        from: a,
        to: b,
        center: c,
        radius,
        ccw: cross > 0.0,
    }
}

fn fmt_pt(out: &mut String, p: (f64, f64)) {
    // y is flipped so the picture keeps the mathematical orientation
    write!(out, "{:.5} {:.5}", p.0, -p.1 + 0.0).unwrap();
}

fn arc_ends(arc: &DiskArc) -> ((f64, f64), (f64, f64)) {
    match *arc {
        DiskArc::Line { from, to } | DiskArc::Circle { from, to, .. } => (from, to),
    }
}

/// The drawing command continuing a path from the start of `arc` to its end.
fn arc_command(arc: &DiskArc) -> String {
    let mut d = String::new();
    match *arc {
        DiskArc::Line { to, .. } => {
            d.push_str("L ");
            fmt_pt(&mut d, to);
        }
        DiskArc::Circle {
            to, radius, ccw, ..
        } => {
            // visually counter-clockwise is SVG's negative sweep
            write!(
                d,
                "A {radius:.5} {radius:.5} 0 0 {} ",
                if ccw { 0 } else { 1 }
            )
            .unwrap();
            fmt_pt(&mut d, to);
        }
    }
    d
}

/// SVG path data for one geodesic segment.
pub fn arc_path(arc: &DiskArc) -> String {
    let mut d = String::from("M ");
    fmt_pt(&mut d, arc_ends(arc).0);
    d.push(' ');
    d.push_str(&arc_command(arc));
    d
}

/// Path data for a closed geodesic polygon.
fn polygon_path(poly: &[HPoint], g: &HIsometry) -> String {
    let n = poly.len();
    let mut d = String::from("M ");
    fmt_pt(&mut d, to_poincare(&g.apply(&poly[0])));
    for k in 0..n {
        d.push(' ');
        d.push_str(&arc_command(&disk_arc(
            &g.apply(&poly[k]),
            &g.apply(&poly[(k + 1) % n]),
        )));
    }
    d.push_str(" Z");
    d
}

fn segment(p: &HPoint, q: &HPoint, g: &HIsometry) -> String {
    arc_path(&disk_arc(&g.apply(p), &g.apply(q)))
}

/// Deck transformation bringing `p` into the octagon.
fn into_domain(group: &FuchsianGroup, domain: &FundamentalDomain, p: &HPoint) -> Result<HIsometry> {
    let (_, w) = reduce_to_domain(group, domain, p)?;
    Ok(group.eval(&w).inverse())
}

pub fn render_svg(
    phi: &GeodesicMapping,
    group: &FuchsianGroup,
    domain: &FundamentalDomain,
    opts: &RenderOptions,
) -> Result<String> {
    let complex = phi.complex();
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{0}" viewBox="-1.02 -1.02 2.04 2.04">"#,
        opts.size
    )
    .unwrap();
    s.push_str(
        "<style>\
         .disk{fill:#fbfbf8;stroke:#333;stroke-width:0.004}\
         .domain{fill:none;stroke:#c44;stroke-width:0.004;stroke-dasharray:0.015 0.01}\
         .edge{fill:none;stroke:#235;stroke-width:0.003}\
         .ghost{fill:none;stroke:#9ab;stroke-width:0.002}\
         .kernel{fill:#e8b33a;fill-opacity:0.35;stroke:#b07d00;stroke-width:0.003}\
         .vertex{fill:#d22}\
         </style>\n",
    );
    s.push_str("<circle class=\"disk\" cx=\"0\" cy=\"0\" r=\"1\"/>\n");

    writeln!(
        s,
        "<path class=\"domain\" d=\"{}\"/>",
        polygon_path(&domain.vertices, &HIsometry::identity())
    )
    .unwrap();

    let mut edges = Vec::with_capacity(complex.edges().len());
    for e in 0..complex.edges().len() {
        let d = 2 * e;
        let (i, _) = complex.directed(d);
        let p = *phi.lift(i);
        let q = phi.head_position(d);
        let g = into_domain(group, domain, &geodesic_eval(&p, &q, 0.5))?;
        edges.push((p, q, g));
    }
    if opts.ghosts {
        s.push_str("<g class=\"ghosts\">\n");
        for l in Letter::all() {
            let gl = group.generator(l);
            for (p, q, g) in &edges {
                writeln!(
                    s,
                    "<path class=\"ghost\" d=\"{}\"/>",
                    segment(p, q, &gl.compose(g))
                )
                .unwrap();
            }
        }
        s.push_str("</g>\n");
    }
    if let (Some(v), Some(poly)) = (opts.highlight, &opts.overlay) {
        let g = into_domain(group, domain, phi.lift(v))?;
        writeln!(
            s,
            "<path class=\"kernel\" d=\"{}\"/>",
            polygon_path(poly, &g)
        )
        .unwrap();
    }
    for (e, (p, q, g)) in edges.iter().enumerate() {
        let [i, j] = complex.edges()[e];
        writeln!(
            s,
            "<path class=\"edge\" data-edge=\"{i}-{j}\" d=\"{}\"/>",
            segment(p, q, g)
        )
        .unwrap();
    }
    if let Some(v) = opts.highlight {
        let g = into_domain(group, domain, phi.lift(v))?;
        let (x, y) = to_poincare(&g.apply(phi.lift(v)));
        writeln!(
            s,
            "<circle class=\"vertex\" cx=\"{x:.5}\" cy=\"{:.5}\" r=\"0.012\"/>",
            -y + 0.0
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}
