//! Deterministic text renderers for cacti and their diagram views. Exact
//! rationals stay exact in structural output (DOT edge labels, point
//! annotations); coordinates become fixed four-decimal numbers only here.

use num_traits::{ToPrimitive, Zero};

use crate::cactus::{Cactus, Lobe, TopType, TtLobe};
use crate::diagrams::{ChordDiagram, DtNode, DualTree};
use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Dot,
    Tikz,
    Svg,
}

impl RenderFormat {
    pub fn from_name(s: &str) -> Option<RenderFormat> {
        match s {
            "dot" => Some(RenderFormat::Dot),
            "tikz" => Some(RenderFormat::Tikz),
            "svg" => Some(RenderFormat::Svg),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RenderFormat::Dot => "dot",
            RenderFormat::Tikz => "tikz",
            RenderFormat::Svg => "svg",
        }
    }
}

enum Prim {
    Circle { cx: f64, cy: f64, r: f64 },
    Line { x1: f64, y1: f64, x2: f64, y2: f64 },
    Chord { x1: f64, y1: f64, x2: f64, y2: f64 },
    Dot { x: f64, y: f64, filled: bool },
    Text { x: f64, y: f64, s: String },
}

struct Sketch {
    nodes: Vec<(String, String, bool)>,
    edges: Vec<(String, String, String)>,
}

fn f64_of(q: &Q) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

fn dec(v: f64) -> String {
    let v = if v.abs() < 1e-9 { 0.0 } else { v };
    format!("{v:.4}")
}

fn on_circle(cx: f64, cy: f64, r: f64, deg: f64) -> (f64, f64) {
    let rad = deg.to_radians();
    (cx + r * rad.cos(), cy + r * rad.sin())
}

fn dot_of(s: &Sketch) -> String {
    let mut out = String::from("graph {\n");
    out.push_str("  node [fontsize=10];\n");
    for (id, label, filled) in &s.nodes {
        let style = if *filled {
            "shape=point, width=0.12"
        } else {
            "shape=circle"
        };
        out.push_str(&format!("  {id} [label=\"{label}\", {style}];\n"));
    }
    for (a, b, label) in &s.edges {
        if label.is_empty() {
            out.push_str(&format!("  {a} -- {b};\n"));
        } else {
            out.push_str(&format!("  {a} -- {b} [label=\"{label}\"];\n"));
        }
    }
    out.push_str("}\n");
    out
}

fn tikz_of(prims: &[Prim]) -> String {
    let mut out = String::from("\\begin{tikzpicture}[scale=1.2]\n");
    for p in prims {
        match p {
            Prim::Circle { cx, cy, r } => {
                out.push_str(&format!(
                    "  \\draw ({},{}) circle[radius={}];\n",
                    dec(*cx),
                    dec(*cy),
                    dec(*r)
                ));
            }
            Prim::Line { x1, y1, x2, y2 } | Prim::Chord { x1, y1, x2, y2 } => {
                out.push_str(&format!(
                    "  \\draw ({},{}) -- ({},{});\n",
                    dec(*x1),
                    dec(*y1),
                    dec(*x2),
                    dec(*y2)
                ));
            }
            Prim::Dot { x, y, filled } => {
                let cmd = if *filled { "\\fill" } else { "\\draw" };
                out.push_str(&format!(
                    "  {cmd} ({},{}) circle[radius=0.045];\n",
                    dec(*x),
                    dec(*y)
                ));
            }
            Prim::Text { x, y, s } => {
                out.push_str(&format!(
                    "  \\node[font=\\scriptsize] at ({},{}) {{{s}}};\n",
                    dec(*x),
                    dec(*y)
                ));
            }
        }
    }
    out.push_str("\\end{tikzpicture}\n");
    out
}

fn svg_of(prims: &[Prim]) -> String {
    // svg's y axis points down; flip so the figures keep their orientation
    let mut lo = (f64::INFINITY, f64::INFINITY);
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |x: f64, y: f64, pad: f64| {
        lo.0 = lo.0.min(x - pad);
        lo.1 = lo.1.min(-y - pad);
        hi.0 = hi.0.max(x + pad);
        hi.1 = hi.1.max(-y + pad);
    };
    for p in prims {
        match p {
            Prim::Circle { cx, cy, r } => grow(*cx, *cy, *r),
            Prim::Line { x1, y1, x2, y2 } | Prim::Chord { x1, y1, x2, y2 } => {
                grow(*x1, *y1, 0.0);
                grow(*x2, *y2, 0.0);
            }
            Prim::Dot { x, y, .. } => grow(*x, *y, 0.1),
            Prim::Text { x, y, .. } => grow(*x, *y, 0.3),
        }
    }
    if !lo.0.is_finite() {
        lo = (-1.0, -1.0);
        hi = (1.0, 1.0);
    }
    let margin = 0.4;
    let (x0, y0) = (lo.0 - margin, lo.1 - margin);
    let (w, h) = (hi.0 - lo.0 + 2.0 * margin, hi.1 - lo.1 + 2.0 * margin);
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"{}\" height=\"{}\">\n",
        dec(x0),
        dec(y0),
        dec(w),
        dec(h),
        (w * 90.0).round() as i64,
        (h * 90.0).round() as i64
    );
    for p in prims {
        match p {
            Prim::Circle { cx, cy, r } => {
                out.push_str(&format!(
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.02\"/>\n",
                    dec(*cx),
                    dec(-cy),
                    dec(*r)
                ));
            }
            Prim::Line { x1, y1, x2, y2 } => {
                out.push_str(&format!(
                    "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"0.02\"/>\n",
                    dec(*x1),
                    dec(-y1),
                    dec(*x2),
                    dec(-y2)
                ));
            }
            Prim::Chord { x1, y1, x2, y2 } => {
                out.push_str(&format!(
                    "  <path d=\"M {} {} L {} {}\" fill=\"none\" stroke=\"black\" stroke-width=\"0.02\"/>\n",
                    dec(*x1),
                    dec(-y1),
                    dec(*x2),
                    dec(-y2)
                ));
            }
            Prim::Dot { x, y, filled } => {
                let fill = if *filled { "black" } else { "white" };
                out.push_str(&format!(
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"0.05\" fill=\"{fill}\" stroke=\"black\" stroke-width=\"0.015\"/>\n",
                    dec(*x),
                    dec(-y)
                ));
            }
            Prim::Text { x, y, s } => {
                out.push_str(&format!(
                    "  <text x=\"{}\" y=\"{}\" font-size=\"0.18\" text-anchor=\"middle\">{s}</text>\n",
                    dec(*x),
                    dec(-y)
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

fn cactus_prims(c: &Cactus) -> Vec<Prim> {
    fn place(lobe: &Lobe, c: &Cactus, at: (f64, f64), dir: f64, prims: &mut Vec<Prim>) {
        let r = f64_of(&lobe.radius());
        let (cx, cy) = on_circle(at.0, at.1, r, dir);
        prims.push(Prim::Circle { cx, cy, r });
        prims.push(Prim::Text { x: cx, y: cy, s: lobe.label.to_string() });
        let entry = dir + 180.0;
        if c.variety.spined() {
            let s = c.spines.get(&lobe.label).cloned().unwrap_or_else(Q::zero);
            if !s.is_zero() {
                let ang = entry + 360.0 * f64_of(&s) / r;
                let (px, py) = on_circle(cx, cy, r, ang);
                prims.push(Prim::Dot { x: px, y: py, filled: false });
            }
        }
        let mut own = Q::zero();
        for (t, site) in lobe.sites.iter().enumerate() {
            own += &lobe.arcs[t];
            let ang = entry + 360.0 * f64_of(&own) / r;
            let p = on_circle(cx, cy, r, ang);
            for sub in &site.lobes {
                place(sub, c, p, ang, prims);
            }
            prims.push(Prim::Dot { x: p.0, y: p.1, filled: true });
        }
    }
    let mut prims = Vec::new();
    let k = c.root.lobes.len();
    for (j, lobe) in c.root.lobes.iter().enumerate() {
        let dir = 90.0 + 360.0 * j as f64 / k as f64;
        place(lobe, c, (0.0, 0.0), dir, &mut prims);
    }
    prims.push(Prim::Dot { x: 0.0, y: 0.0, filled: true });
    prims
}

fn cactus_sketch(c: &Cactus) -> Sketch {
    let t = crate::diagrams::dual_tree(c);
    dual_tree_sketch(&t)
}

pub fn render_cactus(c: &Cactus, fmt: RenderFormat) -> String {
    match fmt {
        RenderFormat::Dot => dot_of(&cactus_sketch(c)),
        RenderFormat::Tikz => tikz_of(&cactus_prims(c)),
        RenderFormat::Svg => svg_of(&cactus_prims(c)),
    }
}

// Planted-tree layout: leaves take consecutive x slots, inner vertices sit
// over the midpoint of their span, depth grows downward.
fn tree_prims(
    nodes: &[(f64, f64, bool, String)],
    edges: &[(usize, usize, String)],
) -> Vec<Prim> {
    let mut prims = Vec::new();
    for (a, b, label) in edges {
        let (x1, y1, ..) = nodes[*a];
        let (x2, y2, ..) = nodes[*b];
        prims.push(Prim::Line { x1, y1, x2, y2 });
        if !label.is_empty() {
            prims.push(Prim::Text {
                x: (x1 + x2) / 2.0 + 0.22,
                y: (y1 + y2) / 2.0,
                s: label.clone(),
            });
        }
    }
    for (x, y, filled, label) in nodes {
        if *filled {
            prims.push(Prim::Dot { x: *x, y: *y, filled: true });
        } else {
            prims.push(Prim::Circle { cx: *x, cy: *y, r: 0.22 });
        }
        if !label.is_empty() {
            prims.push(Prim::Text { x: *x, y: *y + 0.45, s: label.clone() });
        }
    }
    prims
}

fn toptype_layout(t: &TopType) -> (Vec<(f64, f64, bool, String)>, Vec<(usize, usize, String)>) {
    // nodes: (x, y, filled/black, label); bipartite: white lobes carry labels
    let mut nodes: Vec<(f64, f64, bool, String)> = Vec::new();
    let mut edges: Vec<(usize, usize, String)> = Vec::new();
    fn white(
        l: &TtLobe,
        depth: f64,
        next_x: &mut f64,
        nodes: &mut Vec<(f64, f64, bool, String)>,
        edges: &mut Vec<(usize, usize, String)>,
    ) -> usize {
        let me = nodes.len();
        nodes.push((0.0, -depth, false, l.label.to_string()));
        let mut xs = Vec::new();
        for site in &l.sites {
            let b = nodes.len();
            nodes.push((0.0, -depth - 1.0, true, String::new()));
            edges.push((me, b, String::new()));
            let mut bxs = Vec::new();
            for sub in &site.lobes {
                let w = white(sub, depth + 2.0, next_x, nodes, edges);
                edges.push((b, w, String::new()));
                bxs.push(nodes[w].0);
            }
            let bx = if bxs.is_empty() {
                let x = *next_x;
                *next_x += 1.0;
                x
            } else {
                (bxs[0] + bxs[bxs.len() - 1]) / 2.0
            };
            nodes[b].0 = bx;
            xs.push(bx);
        }
        let x = if xs.is_empty() {
            let x = *next_x;
            *next_x += 1.0;
            x
        } else {
            (xs[0] + xs[xs.len() - 1]) / 2.0
        };
        nodes[me].0 = x;
        me
    }
    let root = nodes.len();
    nodes.push((0.0, 1.0, true, String::new()));
    let mut next_x = 0.0;
    let mut xs = Vec::new();
    for l in &t.root.lobes {
        let w = white(l, 0.0, &mut next_x, &mut nodes, &mut edges);
        edges.push((root, w, String::new()));
        xs.push(nodes[w].0);
    }
    nodes[root].0 = (xs[0] + xs[xs.len() - 1]) / 2.0;
    (nodes, edges)
}

fn toptype_sketch(t: &TopType) -> Sketch {
    let mut sk = Sketch { nodes: Vec::new(), edges: Vec::new() };
    sk.nodes.push(("b0".into(), String::new(), true));
    fn walk(l: &TtLobe, parent: String, sk: &mut Sketch) {
        let wid = format!("w{}", l.label);
        sk.nodes.push((wid.clone(), l.label.to_string(), false));
        sk.edges.push((parent, wid.clone(), String::new()));
        for (t, site) in l.sites.iter().enumerate() {
            let bid = format!("b{}_{}", l.label, t + 1);
            sk.nodes.push((bid.clone(), String::new(), true));
            sk.edges.push((wid.clone(), bid.clone(), String::new()));
            for sub in &site.lobes {
                walk(sub, bid.clone(), sk);
            }
        }
    }
    for l in &t.root.lobes {
        walk(l, "b0".into(), &mut sk);
    }
    sk
}

pub fn render_toptype(t: &TopType, fmt: RenderFormat) -> String {
    match fmt {
        RenderFormat::Dot => dot_of(&toptype_sketch(t)),
        RenderFormat::Tikz | RenderFormat::Svg => {
            let (nodes, edges) = toptype_layout(t);
            let prims = tree_prims(&nodes, &edges);
            match fmt {
                RenderFormat::Tikz => tikz_of(&prims),
                _ => svg_of(&prims),
            }
        }
    }
}

fn dt_label(n: &DtNode) -> String {
    let mut s = format!("{} r={}", n.label, fmt_q(&n.radius));
    if let Some(sp) = &n.spine {
        s.push_str(&format!(" s={}", fmt_q(sp)));
    }
    s
}

fn dual_tree_sketch(t: &DualTree) -> Sketch {
    let mut sk = Sketch { nodes: Vec::new(), edges: Vec::new() };
    sk.nodes.push(("base".into(), String::new(), true));
    fn walk(n: &DtNode, parent: &str, w: &str, sk: &mut Sketch) {
        let id = format!("w{}", n.label);
        sk.nodes.push((id.clone(), dt_label(n), false));
        sk.edges.push((parent.to_string(), id.clone(), w.to_string()));
        for (wt, c) in &n.children {
            walk(c, &id, &fmt_q(wt), sk);
        }
    }
    for r in &t.roots {
        walk(r, "base", "0", &mut sk);
    }
    sk
}

fn dual_tree_layout(t: &DualTree) -> (Vec<(f64, f64, bool, String)>, Vec<(usize, usize, String)>) {
    let mut nodes: Vec<(f64, f64, bool, String)> = Vec::new();
    let mut edges: Vec<(usize, usize, String)> = Vec::new();
    fn place(
        n: &DtNode,
        depth: f64,
        next_x: &mut f64,
        nodes: &mut Vec<(f64, f64, bool, String)>,
        edges: &mut Vec<(usize, usize, String)>,
    ) -> usize {
        let me = nodes.len();
        nodes.push((0.0, -depth, false, dt_label(n)));
        let mut xs = Vec::new();
        for (w, c) in &n.children {
            let k = place(c, depth + 1.2, next_x, nodes, edges);
            edges.push((me, k, fmt_q(w)));
            xs.push(nodes[k].0);
        }
        let x = if xs.is_empty() {
            let x = *next_x;
            *next_x += 1.2;
            x
        } else {
            (xs[0] + xs[xs.len() - 1]) / 2.0
        };
        nodes[me].0 = x;
        me
    }
    let base = nodes.len();
    nodes.push((0.0, 1.0, true, String::new()));
    let mut next_x = 0.0;
    let mut xs = Vec::new();
    for r in &t.roots {
        let k = place(r, 0.0, &mut next_x, &mut nodes, &mut edges);
        edges.push((base, k, "0".into()));
        xs.push(nodes[k].0);
    }
    nodes[base].0 = (xs[0] + xs[xs.len() - 1]) / 2.0;
    (nodes, edges)
}

pub fn render_dual_tree(t: &DualTree, fmt: RenderFormat) -> String {
    match fmt {
        RenderFormat::Dot => dot_of(&dual_tree_sketch(t)),
        RenderFormat::Tikz | RenderFormat::Svg => {
            let (nodes, edges) = dual_tree_layout(t);
            let prims = tree_prims(&nodes, &edges);
            match fmt {
                RenderFormat::Tikz => tikz_of(&prims),
                _ => svg_of(&prims),
            }
        }
    }
}

fn chord_prims(d: &ChordDiagram) -> Vec<Prim> {
    let mut prims = vec![Prim::Circle { cx: 0.0, cy: 0.0, r: 1.0 }];
    let angle = |pos: &Q| 90.0 + 360.0 * f64_of(pos) / f64_of(&d.total);
    for p in &d.points {
        let a = angle(p);
        let (x, y) = on_circle(0.0, 0.0, 1.0, a);
        prims.push(Prim::Dot { x, y, filled: true });
        let (tx, ty) = on_circle(0.0, 0.0, 1.22, a);
        prims.push(Prim::Text { x: tx, y: ty, s: fmt_q(p) });
    }
    for c in &d.chords {
        let (x1, y1) = on_circle(0.0, 0.0, 1.0, angle(&d.points[c.from]));
        let (x2, y2) = on_circle(0.0, 0.0, 1.0, angle(&d.points[c.to]));
        prims.push(Prim::Chord { x1, y1, x2, y2 });
        prims.push(Prim::Text {
            x: (x1 + x2) / 2.0 + 0.12,
            y: (y1 + y2) / 2.0 + 0.12,
            s: c.label.to_string(),
        });
    }
    for (l, m) in &d.spine_marks {
        let a = angle(m);
        let (x, y) = on_circle(0.0, 0.0, 1.0, a);
        prims.push(Prim::Dot { x, y, filled: false });
        let (tx, ty) = on_circle(0.0, 0.0, 0.82, a);
        prims.push(Prim::Text { x: tx, y: ty, s: format!("z{l}") });
    }
    prims
}

fn chord_sketch(d: &ChordDiagram) -> Sketch {
    let mut sk = Sketch { nodes: Vec::new(), edges: Vec::new() };
    for (i, p) in d.points.iter().enumerate() {
        sk.nodes.push((format!("p{i}"), fmt_q(p), false));
    }
    for i in 0..d.points.len() {
        let j = (i + 1) % d.points.len();
        if i != j {
            sk.edges.push((format!("p{i}"), format!("p{j}"), String::new()));
        }
    }
    for c in &d.chords {
        sk.edges.push((format!("p{}", c.from), format!("p{}", c.to), c.label.to_string()));
    }
    sk
}

pub fn render_chord_diagram(d: &ChordDiagram, fmt: RenderFormat) -> String {
    match fmt {
        RenderFormat::Dot => dot_of(&chord_sketch(d)),
        RenderFormat::Tikz => tikz_of(&chord_prims(d)),
        RenderFormat::Svg => svg_of(&chord_prims(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cactus::Variety;
    use crate::diagrams::{chord_diagram, dual_tree};
    use crate::rational::{q, qi};
    use std::collections::BTreeMap;

    fn corolla() -> Cactus {
        Cactus::corolla(Variety::Cact, &[qi(1), qi(1)]).unwrap()
    }

    fn chain() -> Cactus {
        Cactus::from_word(
            Variety::Cact,
            &[(1, q(1, 3)), (2, qi(1)), (1, q(2, 3))],
            &BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn formats_parse_by_name() {
        for f in [RenderFormat::Dot, RenderFormat::Tikz, RenderFormat::Svg] {
            assert_eq!(RenderFormat::from_name(f.name()), Some(f));
        }
        assert_eq!(RenderFormat::from_name("png"), None);
    }

    #[test]
    fn output_is_stable_and_newline_terminated() {
        let c = chain();
        let t = dual_tree(&c);
        let d = chord_diagram(&c);
        let tau = c.toptype();
        for fmt in [RenderFormat::Dot, RenderFormat::Tikz, RenderFormat::Svg] {
            for s in [
                render_cactus(&c, fmt),
                render_dual_tree(&t, fmt),
                render_chord_diagram(&d, fmt),
                render_toptype(&tau, fmt),
            ] {
                assert!(s.ends_with('\n'));
                assert!(!s.contains("NaN"));
                assert!(s.len() > 20);
            }
            assert_eq!(render_cactus(&c, fmt), render_cactus(&c, fmt));
        }
    }

    #[test]
    fn svg_draws_one_path_per_chord() {
        let d = chord_diagram(&corolla());
        let svg = render_chord_diagram(&d, RenderFormat::Svg);
        assert_eq!(svg.matches("<path").count(), d.chords.len());
        assert_eq!(svg.matches("<svg").count(), 1);

        let single = Cactus::single(Variety::Cact, qi(1), None).unwrap();
        let svg = render_chord_diagram(&chord_diagram(&single), RenderFormat::Svg);
        assert_eq!(svg.matches("<path").count(), 0);
    }

    #[test]
    fn dot_output_names_every_lobe() {
        let dot = render_cactus(&corolla(), RenderFormat::Dot);
        assert!(dot.starts_with("graph {"));
        assert!(dot.contains("w1"));
        assert!(dot.contains("w2"));
        assert!(dot.contains("r=1"));

        let spined = Cactus::single(Variety::Cacti1, qi(1), Some(q(1, 4))).unwrap();
        let dot = render_cactus(&spined, RenderFormat::Dot);
        assert!(dot.contains("s=1/4"));
    }

    #[test]
    fn tikz_wraps_a_picture() {
        let s = render_cactus(&chain(), RenderFormat::Tikz);
        assert!(s.starts_with("\\begin{tikzpicture}"));
        assert!(s.trim_end().ends_with("\\end{tikzpicture}"));
        // two lobes, two circles
        assert_eq!(s.matches("circle[radius=").count() - s.matches("radius=0.045").count(), 2);
    }
}
