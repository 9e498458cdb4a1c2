//! Deterministic DOT and SVG drawings of the K-type lattice and of the
//! constituent order.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lightcone::scalar::{rat, ratio};
use lightcone::transitions::directions;
use lightcone::{barrier_line, BarrierLine, CompositionDiagram, Rational};

use crate::error::CliError;
use crate::report::{is_trivial, role, Role};

/// Fill colors, indexed by constituent id.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// Pixels per lattice unit.
const SCALE: i64 = 20;
/// Margin around the lattice, in pixels.
const MARGIN: i64 = 40;
/// Width of the Hasse inset, in pixels.
const INSET: i64 = 260;

fn color(id: usize) -> &'static str {
    PALETTE[id % PALETTE.len()]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn title(d: &CompositionDiagram) -> String {
    format!("{} {}", d.ctx, d.param)
}

fn role_name(r: Role) -> &'static str {
    match r {
        Role::Isolated => "isolated",
        Role::Submodule => "submodule",
        Role::Quotient => "quotient",
        Role::Middle => "middle",
    }
}

fn node_label(d: &CompositionDiagram, id: usize) -> String {
    let c = &d.constituents[id];
    let mut parts = vec![format!("#{id}")];
    if let Some(s) = c.summand {
        parts.push(s.to_string());
    }
    parts.push(role_name(role(d, id)).to_string());
    if is_trivial(d, c) {
        parts.push("trivial".into());
    } else if !c.boundary_open {
        parts.push("finite".into());
    }
    parts.join(" ")
}

/// Real barriers of every defined direction, without repeated lines.
pub fn barriers(d: &CompositionDiagram) -> Result<Vec<BarrierLine>, CliError> {
    let mut out: Vec<BarrierLine> = Vec::new();
    for &dir in directions(&d.ctx) {
        let b = barrier_line(&d.ctx, &d.param, dir).map_err(lightcone::StructureError::from)?;
        if b.positive_side.is_some() && !out.iter().any(|o| o.coincides_with(&b)) {
            out.push(b);
        }
    }
    Ok(out)
}

/// DOT source. In Hasse-only mode only the constituent order is drawn.
pub fn dot(d: &CompositionDiagram, hasse_only: bool) -> Result<String, CliError> {
    let mut s = String::new();
    let _ = writeln!(s, "digraph lightcone {{");
    let _ = writeln!(s, "  graph [label=\"{}\", labelloc=t];", escape(&title(d)));
    let _ = writeln!(s, "  node [style=filled, fontname=\"Helvetica\"];");
    if !hasse_only {
        let _ = writeln!(s, "  subgraph cluster_lattice {{");
        let _ = writeln!(s, "    label=\"K-types (window {})\";", d.window.extent);
        let _ = writeln!(
            s,
            "    node [shape=circle, width=0.2, fixedsize=true, label=\"\"];"
        );
        let mut points: Vec<(i64, i64, usize)> = d
            .constituents
            .iter()
            .flat_map(|c| c.points.iter().map(move |p| (p.m, p.n, c.id)))
            .collect();
        points.sort();
        for (m, n, id) in points {
            let _ = writeln!(
                s,
                "    \"k_{m}_{n}\" [pos=\"{m},{n}!\", fillcolor=\"{}\", tooltip=\"({m},{n}) #{id}\"];",
                color(id)
            );
        }
        let _ = writeln!(s, "  }}");
        let _ = writeln!(s, "  subgraph cluster_barriers {{");
        let _ = writeln!(s, "    label=\"barriers\";");
        let _ = writeln!(s, "    node [shape=box, fillcolor=\"#ffffff\"];");
        for b in barriers(d)? {
            let _ = writeln!(
                s,
                "    \"b_{}\" [label=\"{}: {}\"];",
                b.direction,
                b.direction,
                escape(&b.equation())
            );
        }
        let _ = writeln!(s, "  }}");
    }
    let _ = writeln!(s, "  subgraph cluster_hasse {{");
    let _ = writeln!(s, "    label=\"Hasse diagram\";");
    let _ = writeln!(s, "    node [shape=box];");
    for c in &d.constituents {
        let _ = writeln!(
            s,
            "    \"c{}\" [label=\"{}\", fillcolor=\"{}\"];",
            c.id,
            node_label(d, c.id),
            color(c.id)
        );
    }
    for &(lower, upper) in &d.covers {
        let _ = writeln!(s, "    \"c{upper}\" -> \"c{lower}\";");
    }
    let _ = writeln!(s, "  }}");
    let _ = writeln!(s, "}}");
    Ok(s)
}

/// Exact decimal rendering when the value has at most four decimals,
/// otherwise rounded to four.
fn num(x: &Rational) -> String {
    let scaled = x * rat(10_000);
    let rounded = if scaled.is_integer() {
        scaled.to_integer()
    } else {
        scaled.round().to_integer()
    };
    let neg = rounded < 0.into();
    let digits = if neg { -rounded } else { rounded }.to_string();
    let digits = format!("{digits:0>5}");
    let (int, frac) = digits.split_at(digits.len() - 4);
    let frac = frac.trim_end_matches('0');
    let sign = if neg { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

/// Lattice rectangle `[0, m_hi] × [n_lo, n_hi]`.
struct Frame {
    m_hi: i64,
    n_lo: i64,
    n_hi: i64,
}

impl Frame {
    fn of(d: &CompositionDiagram) -> Frame {
        let e = d.window.extent;
        Frame {
            m_hi: e,
            n_lo: if d.ctx.has_signed_n() { -e } else { 0 },
            n_hi: if d.ctx.is_chain() { 0 } else { e },
        }
    }

    fn x(&self, m: &Rational) -> Rational {
        rat(MARGIN) + m * rat(SCALE)
    }

    fn y(&self, n: &Rational) -> Rational {
        rat(MARGIN) + (rat(self.n_hi) - n) * rat(SCALE)
    }

    fn width(&self) -> i64 {
        2 * MARGIN + SCALE * self.m_hi
    }

    fn height(&self) -> i64 {
        2 * MARGIN + SCALE * (self.n_hi - self.n_lo)
    }

    /// Endpoints of `constant + cx·x + cy·y = 0` inside the frame.
    fn clip(&self, b: &BarrierLine) -> Option<((Rational, Rational), (Rational, Rational))> {
        let c = b.form.constant.as_rational()?.clone();
        let (cx, cy) = (rat(b.form.cx), rat(b.form.cy));
        let (x0, x1) = (rat(0), rat(self.m_hi));
        let (y0, y1) = (rat(self.n_lo), rat(self.n_hi));
        let inside = |x: &Rational, y: &Rational| &x0 <= x && x <= &x1 && &y0 <= y && y <= &y1;
        let mut hits: Vec<(Rational, Rational)> = Vec::new();
        if b.form.cy != 0 {
            for x in [&x0, &x1] {
                let y = -(&c + &cx * x) / &cy;
                hits.push((x.clone(), y));
            }
        }
        if b.form.cx != 0 {
            for y in [&y0, &y1] {
                let x = -(&c + &cy * y) / &cx;
                hits.push((x, y.clone()));
            }
        }
        hits.retain(|(x, y)| inside(x, y));
        hits.sort();
        hits.dedup();
        match hits.len() {
            0 => None,
            _ => Some((hits[0].clone(), hits[hits.len() - 1].clone())),
        }
    }
}

/// Longest chain below each constituent.
fn levels(d: &CompositionDiagram) -> Vec<usize> {
    let mut level = vec![0usize; d.len()];
    for _ in 0..d.len() {
        for &(lower, upper) in &d.order {
            level[upper] = level[upper].max(level[lower] + 1);
        }
    }
    level
}

/// Hasse diagram drawn in the box with top-left corner `(x0, y0)`.
fn hasse_svg(s: &mut String, d: &CompositionDiagram, x0: i64, y0: i64, height: i64) {
    let level = levels(d);
    let top = level.iter().copied().max().unwrap_or(0) as i64;
    let mut rows: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (id, &l) in level.iter().enumerate() {
        rows.entry(l).or_default().push(id);
    }
    let step = if top == 0 { 0 } else { (height - 80) / top };
    let mut pos = vec![(rat(0), rat(0)); d.len()];
    for (&l, ids) in &rows {
        let k = ids.len() as i64;
        for (i, &id) in ids.iter().enumerate() {
            let x = rat(x0) + ratio(INSET * (2 * i as i64 + 1), 2 * k);
            let y = rat(y0 + height - 40 - step * l as i64);
            pos[id] = (x, y);
        }
    }
    let _ = writeln!(
        s,
        "  <g id=\"hasse\">\n    <text x=\"{}\" y=\"{}\" font-size=\"12\">Hasse diagram</text>",
        x0 + 10,
        y0 + 16
    );
    for &(lower, upper) in &d.covers {
        let (a, b) = (&pos[lower], &pos[upper]);
        let _ = writeln!(
            s,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#000000\"/>",
            num(&a.0),
            num(&a.1),
            num(&b.0),
            num(&b.1)
        );
    }
    for c in &d.constituents {
        let (x, y) = &pos[c.id];
        let stroke = if c.boundary_open {
            "#000000"
        } else {
            "#000000\" stroke-dasharray=\"2,2"
        };
        let _ = writeln!(
            s,
            "    <circle cx=\"{}\" cy=\"{}\" r=\"9\" fill=\"{}\" stroke=\"{stroke}\"/>",
            num(x),
            num(y),
            color(c.id)
        );
        let _ = writeln!(
            s,
            "    <text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>",
            num(&(x + rat(12))),
            num(&(y + rat(4))),
            escape(&node_label(d, c.id))
        );
    }
    let _ = writeln!(s, "  </g>");
}

/// SVG drawing. In Hasse-only mode only the constituent order is drawn.
pub fn svg(d: &CompositionDiagram, hasse_only: bool) -> Result<String, CliError> {
    let mut s = String::new();
    let frame = Frame::of(d);
    let (lattice_w, height) = if hasse_only {
        (0, 320)
    } else {
        (frame.width(), frame.height().max(320))
    };
    let width = lattice_w + INSET;
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{}\" viewBox=\"0 0 {width} {}\">",
        height + 30,
        height + 30
    );
    let _ = writeln!(
        s,
        "  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        s,
        "  <text x=\"10\" y=\"20\" font-size=\"14\">{}</text>",
        escape(&title(d))
    );
    if !hasse_only {
        let _ = writeln!(s, "  <g id=\"lattice\" transform=\"translate(0,30)\">");
        let (ox, oy) = (frame.x(&rat(0)), frame.y(&rat(0)));
        let _ = writeln!(
            s,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\"/>",
            num(&ox),
            num(&oy),
            num(&frame.x(&rat(frame.m_hi))),
            num(&oy)
        );
        let _ = writeln!(
            s,
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#999999\"/>",
            num(&ox),
            num(&frame.y(&rat(frame.n_lo))),
            num(&ox),
            num(&frame.y(&rat(frame.n_hi)))
        );
        for b in barriers(d)? {
            if let Some(((xa, ya), (xb, yb))) = frame.clip(&b) {
                let _ = writeln!(
                    s,
                    "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#444444\" stroke-dasharray=\"6,3\"><title>{} {}</title></line>",
                    num(&frame.x(&xa)),
                    num(&frame.y(&ya)),
                    num(&frame.x(&xb)),
                    num(&frame.y(&yb)),
                    b.direction,
                    escape(&b.equation())
                );
                let _ = writeln!(
                    s,
                    "    <text x=\"{}\" y=\"{}\" font-size=\"10\">{}</text>",
                    num(&(frame.x(&xb) + rat(3))),
                    num(&(frame.y(&yb) - rat(3))),
                    escape(&b.equation())
                );
            }
        }
        for c in &d.constituents {
            for p in &c.points {
                let _ = writeln!(
                    s,
                    "    <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>",
                    num(&frame.x(&rat(p.m))),
                    num(&frame.y(&rat(p.n))),
                    color(c.id)
                );
            }
        }
        let _ = writeln!(s, "  </g>");
    }
    hasse_svg(&mut s, d, lattice_w, 30, height);
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
