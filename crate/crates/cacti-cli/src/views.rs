//! Line-oriented text for the `convert` subcommand: each alternative view of
//! a cactus printed one fact per line, deterministically.

use cacti_core::cactus::Cactus;
use cacti_core::diagrams::{ArcFamily, BwTree, ChordDiagram, DtNode, DualTree};
use cacti_core::graph::MarkedMetricRibbonGraph;
use cacti_core::rational::fmt_q;

fn join(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().collect::<Vec<_>>().join(",")
}

pub fn ribbon_lines(g: &MarkedMetricRibbonGraph) -> Vec<String> {
    let graph = &g.ribbon.graph;
    let cycles = g.ribbon.cycles();
    let mut lines = vec![format!(
        "flags={} edges={} vertices={} cycles={} genus={}",
        graph.n_flags(),
        graph.n_edges(),
        graph.n_vertices(),
        cycles.len(),
        g.ribbon.genus().map_or_else(|_| "-".into(), |v| v.to_string())
    )];
    for v in 0..graph.n_vertices() {
        lines.push(format!(
            "rotation v={v} flags={}",
            join(g.ribbon.rotation(v).iter().map(|f| f.to_string()))
        ));
    }
    for (e, (a, b)) in graph.edges().into_iter().enumerate() {
        lines.push(format!("edge e={e} ends={a},{b} len={}", fmt_q(&g.metric[e])));
    }
    for (k, cycle) in cycles.iter().enumerate() {
        let len = g
            .cycle_length(g.labels[k])
            .map_or_else(|| "-".into(), |l| fmt_q(&l));
        lines.push(format!(
            "cycle label={} mark={} len={} flags={}",
            g.labels[k],
            g.marking[k],
            len,
            join(cycle.iter().map(|f| f.to_string()))
        ));
    }
    lines
}

fn dt_node_lines(node: &DtNode, depth: usize, weight: Option<&str>, lines: &mut Vec<String>) {
    let mut line = format!("node depth={depth} lobe={} r={}", node.label, fmt_q(&node.radius));
    if let Some(w) = weight {
        line.push_str(&format!(" at={w}"));
    }
    if let Some(sp) = &node.spine {
        line.push_str(&format!(" s={}", fmt_q(sp)));
    }
    lines.push(line);
    for (w, child) in &node.children {
        dt_node_lines(child, depth + 1, Some(&fmt_q(w)), lines);
    }
}

pub fn dual_tree_lines(t: &DualTree) -> Vec<String> {
    let mut lines = vec![format!("variety={} roots={}", t.variety.name(), t.roots.len())];
    for root in &t.roots {
        dt_node_lines(root, 0, None, &mut lines);
    }
    lines
}

pub fn chord_lines(d: &ChordDiagram) -> Vec<String> {
    let mut lines = vec![format!(
        "variety={} total={} reduced={}",
        d.variety.name(),
        fmt_q(&d.total),
        if d.reduced { "yes" } else { "no" }
    )];
    lines.push(format!("points={}", join(d.points.iter().map(fmt_q))));
    for ch in &d.chords {
        lines.push(format!("chord lobe={} from={} to={}", ch.label, ch.from, ch.to));
    }
    for (lobe, at) in &d.spine_marks {
        lines.push(format!("spine lobe={lobe} at={}", fmt_q(at)));
    }
    lines
}

pub fn arcs_lines(a: &ArcFamily) -> Vec<String> {
    let mut lines =
        vec![format!("variety={} n={} bands={}", a.variety.name(), a.n, a.bands.len())];
    for (k, band) in a.bands.iter().enumerate() {
        lines.push(format!("band k={k} lobe={} len={}", band.lobe, fmt_q(&band.weight)));
    }
    for (k, order) in a.order_at.iter().enumerate() {
        lines.push(format!(
            "order lobe={} bands={}",
            k + 1,
            join(order.iter().map(|b| b.to_string()))
        ));
    }
    lines
}

pub fn bw_lines(b: &BwTree) -> Vec<String> {
    vec![
        format!("type={} n={} dim={}", b.toptype.key(), b.toptype.n(), b.toptype.dim()),
        format!("lengths={}", join(b.lengths.iter().map(fmt_q))),
    ]
}

/// A one-line summary shared by `compose` style commands when a full document
/// is not wanted.
pub fn summary_line(c: &Cactus) -> String {
    format!("variety={} n={} word={}", c.variety.name(), c.n(), crate::checks::brief(c))
}
