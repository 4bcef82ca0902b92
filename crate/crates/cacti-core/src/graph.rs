//! Graphs presented by flags (half-edges) with a pairing involution, ribbon
//! structure as per-vertex cyclic orders, and the marked metric variant that
//! corresponds to cacti.
//!
//! Conventions: an edge `k` owns flags `2k` and `2k+1`; the involution is
//! `f ^ 1`. The stored permutation `next` is the vertex rotation; boundary
//! cycles are the orbits of `f -> next[f ^ 1]`.

use crate::cactus::{Cactus, CactusError, Lobe, Site, Variety};
use crate::rational::{rem_euclid, Q};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("flag {0} out of range")]
    BadFlag(usize),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("vertex {0} has no flags")]
    IsolatedVertex(usize),
    #[error("vertex {0} has valency {1}, need at least 2")]
    LowValency(usize, usize),
    #[error("rotation at vertex {0} does not match its flag set")]
    BadRotation(usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("Euler count is inconsistent: got {0}")]
    EulerMismatch(i64),
    #[error("edge {0} is a loop; loop contraction is undefined")]
    LoopContraction(usize),
    #[error("edge {0} out of range")]
    BadEdge(usize),
    #[error("marking for cycle {0} is not a flag of that cycle")]
    BadMarking(usize),
    #[error("cycle labels must be a bijection onto 0..{0}")]
    BadLabels(usize),
    #[error("edge {0} has non-positive length")]
    BadMetric(usize),
    #[error("valence-2 vertex {0} carries no marked flag")]
    UnmarkedSpine(usize),
    #[error("graph is not treelike")]
    NotTreelike,
    #[error("graph does not satisfy {0}")]
    IncompatibleShape(String),
    #[error(transparent)]
    Cactus(#[from] CactusError),
}

/// A finite graph given by flags, the pairing involution and the map sending
/// each flag to the vertex it is attached to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_of: Vec<usize>,
    n_vertices: usize,
}

impl Graph {
    /// Builds a graph on `n_vertices` from a list of edges given as vertex
    /// pairs. Edge `k` gets flags `2k` (at the first vertex) and `2k+1`.
    pub fn new(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut vertex_of = Vec::with_capacity(2 * edges.len());
        for (a, b) in edges {
            if *a >= n_vertices {
                return Err(GraphError::BadVertex(*a));
            }
            if *b >= n_vertices {
                return Err(GraphError::BadVertex(*b));
            }
            vertex_of.push(*a);
            vertex_of.push(*b);
        }
        let g = Graph { vertex_of, n_vertices };
        for v in 0..n_vertices {
            if !g.vertex_of.contains(&v) {
                return Err(GraphError::IsolatedVertex(v));
            }
        }
        Ok(g)
    }

    pub fn n_flags(&self) -> usize {
        self.vertex_of.len()
    }

    pub fn n_edges(&self) -> usize {
        self.vertex_of.len() / 2
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn involution(&self, f: usize) -> usize {
        f ^ 1
    }

    pub fn edge_of(&self, f: usize) -> usize {
        f / 2
    }

    pub fn vertex_of(&self, f: usize) -> usize {
        self.vertex_of[f]
    }

    pub fn flags_of(&self, v: usize) -> Vec<usize> {
        (0..self.n_flags()).filter(|f| self.vertex_of[*f] == v).collect()
    }

    pub fn valency(&self, v: usize) -> usize {
        self.vertex_of.iter().filter(|w| **w == v).count()
    }

    /// Edges as vertex pairs, in edge order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n_edges()).map(|k| (self.vertex_of[2 * k], self.vertex_of[2 * k + 1])).collect()
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for f in 0..self.n_flags() {
                if self.vertex_of[f] == v {
                    let w = self.vertex_of[f ^ 1];
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// A graph together with a cyclic order of the flags at each vertex, stored
/// as the successor permutation `next`. All vertices have valency at least 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    pub graph: Graph,
    next: Vec<usize>,
}

impl RibbonGraph {
    /// Builds a ribbon graph from per-vertex rotations, each listing the flags
    /// of that vertex in cyclic order.
    pub fn new(graph: Graph, rotations: &[Vec<usize>]) -> Result<RibbonGraph, GraphError> {
        if rotations.len() != graph.n_vertices() {
            return Err(GraphError::BadVertex(rotations.len()));
        }
        let mut next = vec![usize::MAX; graph.n_flags()];
        for (v, rot) in rotations.iter().enumerate() {
            let mut expected = graph.flags_of(v);
            if expected.len() < 2 {
                return Err(GraphError::LowValency(v, expected.len()));
            }
            let mut given = rot.clone();
            given.sort_unstable();
            expected.sort_unstable();
            if given != expected {
                return Err(GraphError::BadRotation(v));
            }
            for (k, f) in rot.iter().enumerate() {
                if next[*f] != usize::MAX {
                    return Err(GraphError::BadRotation(v));
                }
                next[*f] = rot[(k + 1) % rot.len()];
            }
        }
        Ok(RibbonGraph { graph, next })
    }

    /// The cyclic successor at the common vertex.
    pub fn next_flag(&self, f: usize) -> usize {
        self.next[f]
    }

    /// Boundary operator: successor within the cycle (face) through `f`.
    pub fn cycle_next(&self, f: usize) -> usize {
        self.next[f ^ 1]
    }

    /// All boundary cycles as flag sequences, each starting at its least flag,
    /// ordered by that least flag.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.graph.n_flags();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for f0 in 0..n {
            if seen[f0] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut f = f0;
            loop {
                seen[f] = true;
                cyc.push(f);
                f = self.cycle_next(f);
                if f == f0 {
                    break;
                }
            }
            out.push(cyc);
        }
        out
    }

    /// Genus from the Euler count: `2 - 2g = |V| - |E| + #cycles`.
    pub fn genus(&self) -> Result<usize, GraphError> {
        if !self.graph.is_connected() {
            return Err(GraphError::NotConnected);
        }
        let euler = self.graph.n_vertices() as i64 - self.graph.n_edges() as i64
            + self.cycles().len() as i64;
        let twice_g = 2 - euler;
        if twice_g < 0 || twice_g % 2 != 0 {
            return Err(GraphError::EulerMismatch(euler));
        }
        Ok((twice_g / 2) as usize)
    }

    /// Rotation at a vertex as a flag list starting at the least flag.
    pub fn rotation(&self, v: usize) -> Vec<usize> {
        let flags = self.graph.flags_of(v);
        let start = *flags.iter().min().expect("no isolated vertices");
        let mut out = Vec::with_capacity(flags.len());
        let mut f = start;
        loop {
            out.push(f);
            f = self.next[f];
            if f == start {
                break;
            }
        }
        out
    }
}

/// Structural predicates of a marked metric ribbon graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// Genus 0 and every edge is traversed by the distinguished cycle.
    pub treelike: bool,
    /// Markings sit where the distinguished cycle last touches each cycle and
    /// at most one valence-2 vertex exists (at the distinguished marking).
    pub spineless: bool,
    /// Every non-distinguished cycle has total length 1.
    pub normalized: bool,
}

/// A ribbon graph with labelled boundary cycles, one marked flag per cycle
/// and a positive rational length per edge. Cycle `0` is distinguished.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedMetricRibbonGraph {
    pub ribbon: RibbonGraph,
    /// `labels[k]` is the label of `ribbon.cycles()[k]`; a bijection onto
    /// `0..#cycles`.
    pub labels: Vec<usize>,
    /// `marking[k]` is the marked flag of `ribbon.cycles()[k]`.
    pub marking: Vec<usize>,
    /// Length of each edge, indexed by edge.
    pub metric: Vec<Q>,
}

impl MarkedMetricRibbonGraph {
    pub fn new(
        ribbon: RibbonGraph,
        labels: Vec<usize>,
        marking: Vec<usize>,
        metric: Vec<Q>,
    ) -> Result<MarkedMetricRibbonGraph, GraphError> {
        let cycles = ribbon.cycles();
        let m = cycles.len();
        if labels.len() != m || marking.len() != m {
            return Err(GraphError::BadLabels(m));
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted != (0..m).collect::<Vec<_>>() {
            return Err(GraphError::BadLabels(m));
        }
        for (k, cyc) in cycles.iter().enumerate() {
            if !cyc.contains(&marking[k]) {
                return Err(GraphError::BadMarking(labels[k]));
            }
        }
        if metric.len() != ribbon.graph.n_edges() {
            return Err(GraphError::BadMetric(metric.len()));
        }
        for (e, w) in metric.iter().enumerate() {
            if !w.is_positive() {
                return Err(GraphError::BadMetric(e));
            }
        }
        for v in 0..ribbon.graph.n_vertices() {
            if ribbon.graph.valency(v) == 2
                && !marking.iter().any(|f| ribbon.graph.vertex_of(*f) == v)
            {
                return Err(GraphError::UnmarkedSpine(v));
            }
        }
        Ok(MarkedMetricRibbonGraph { ribbon, labels, marking, metric })
    }

    /// Number of non-distinguished cycles.
    pub fn n(&self) -> usize {
        self.labels.len() - 1
    }

    fn cycle_index_of_flag(&self, f: usize) -> usize {
        for (k, cyc) in self.ribbon.cycles().iter().enumerate() {
            if cyc.contains(&f) {
                return k;
            }
        }
        unreachable!("cycles partition the flags")
    }

    fn index_of_label(&self, label: usize) -> Option<usize> {
        self.labels.iter().position(|l| *l == label)
    }

    /// The marked flag of the cycle carrying `label`.
    pub fn marked_flag(&self, label: usize) -> Option<usize> {
        self.index_of_label(label).map(|k| self.marking[k])
    }

    /// The distinguished cycle in linear order, starting at its marked flag.
    pub fn distinguished_order(&self) -> Vec<usize> {
        let start = self.marked_flag(0).expect("label 0 exists");
        let mut out = Vec::new();
        let mut f = start;
        loop {
            out.push(f);
            f = self.ribbon.cycle_next(f);
            if f == start {
                break;
            }
        }
        out
    }

    /// Total metric length of the cycle carrying `label`.
    pub fn cycle_length(&self, label: usize) -> Option<Q> {
        let k = self.index_of_label(label)?;
        let cyc = &self.ribbon.cycles()[k];
        Some(cyc.iter().map(|f| self.metric[f / 2].clone()).sum())
    }

    pub fn classify(&self) -> Classification {
        let cycles = self.ribbon.cycles();
        let c0 = self.index_of_label(0).expect("label 0 exists");

        let genus0 = matches!(self.ribbon.genus(), Ok(0));
        let mut treelike = genus0;
        if treelike {
            for (k, cyc) in cycles.iter().enumerate() {
                if k == c0 {
                    continue;
                }
                for f in cyc {
                    if self.cycle_index_of_flag(f ^ 1) != c0 {
                        treelike = false;
                    }
                }
            }
        }

        let mut spineless = true;
        let mk0_vertex = self.ribbon.graph.vertex_of(self.marking[c0]);
        for v in 0..self.ribbon.graph.n_vertices() {
            if self.ribbon.graph.valency(v) == 2 && v != mk0_vertex {
                spineless = false;
            }
        }
        // The marking of every other cycle must sit where the distinguished
        // cycle leaves that cycle for the last time.
        let order = self.distinguished_order();
        for (k, _) in cycles.iter().enumerate() {
            if k == c0 {
                continue;
            }
            let last = order.iter().rev().find(|f| self.cycle_index_of_flag(**f ^ 1) == k);
            match last {
                Some(f) if self.marking[k] == (*f ^ 1) => {}
                _ => spineless = false,
            }
        }

        let normalized = (0..cycles.len()).all(|k| {
            k == c0 || self.cycle_length(self.labels[k]).unwrap().is_one()
        });

        Classification { treelike, spineless, normalized }
    }

    /// Contracts a non-loop edge: its endpoints merge, the rotations splice,
    /// and a marking that sat on a removed flag moves to the next flag of its
    /// cycle. Cycle count and genus are preserved.
    pub fn contract_edge(&self, e: usize) -> Result<MarkedMetricRibbonGraph, GraphError> {
        let g = &self.ribbon.graph;
        if e >= g.n_edges() {
            return Err(GraphError::BadEdge(e));
        }
        let (f, fbar) = (2 * e, 2 * e + 1);
        let u = g.vertex_of(f);
        let v = g.vertex_of(fbar);
        if u == v {
            return Err(GraphError::LoopContraction(e));
        }

        // Updated markings, computed in the old graph.
        let new_marks: Vec<usize> = self
            .marking
            .iter()
            .map(|mk| {
                if *mk == f || *mk == fbar {
                    self.ribbon.cycle_next(*mk)
                } else {
                    *mk
                }
            })
            .collect();

        let prev_of = |target: usize| -> usize {
            (0..g.n_flags())
                .find(|x| self.ribbon.next[*x] == target)
                .expect("next is a permutation")
        };
        let mut next = self.ribbon.next.clone();
        let (a, c) = (prev_of(f), prev_of(fbar));
        let (b, d) = (next[f], next[fbar]);
        next[a] = d;
        next[c] = b;

        // Renumber: drop flags f, fbar; merge v into u.
        let keep = |x: usize| x != f && x != fbar;
        let new_flag = |x: usize| if x > fbar { x - 2 } else { x };
        let (lo, hi) = (u.min(v), u.max(v));
        let new_vertex = |w: usize| {
            let w = if w == hi { lo } else { w };
            if w > hi {
                w - 1
            } else {
                w
            }
        };

        let mut vertex_of = Vec::with_capacity(g.n_flags() - 2);
        for x in 0..g.n_flags() {
            if keep(x) {
                vertex_of.push(new_vertex(g.vertex_of(x)));
            }
        }
        let n_vertices = g.n_vertices() - 1;
        let mut edges = Vec::with_capacity(g.n_edges() - 1);
        for k in 0..g.n_edges() {
            if k != e {
                edges.push((vertex_of[new_flag(2 * k)], vertex_of[new_flag(2 * k) + 1]));
            }
        }
        let graph = Graph::new(n_vertices, &edges)?;
        let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
        let mut placed = vec![false; n_vertices];
        for x in 0..g.n_flags() {
            if !keep(x) {
                continue;
            }
            let w = vertex_of[new_flag(x)];
            if placed[w] {
                continue;
            }
            placed[w] = true;
            let mut rot = Vec::new();
            let mut y = x;
            loop {
                rot.push(new_flag(y));
                y = next[y];
                if y == x {
                    break;
                }
            }
            rotations[w] = rot;
        }
        let ribbon = RibbonGraph::new(graph, &rotations)?;

        // Cycles keep their labels; match via any surviving old flag.
        let old_cycles = self.ribbon.cycles();
        let cycles = ribbon.cycles();
        let mut labels = Vec::with_capacity(cycles.len());
        let mut marking = Vec::with_capacity(cycles.len());
        for cyc in &cycles {
            let lift = if cyc[0] >= f { cyc[0] + 2 } else { cyc[0] };
            let old_k = old_cycles
                .iter()
                .position(|c| c.contains(&lift))
                .expect("surviving flag lifts to an old cycle");
            labels.push(self.labels[old_k]);
            marking.push(new_flag(new_marks[old_k]));
        }
        let mut metric = self.metric.clone();
        metric.remove(e);
        MarkedMetricRibbonGraph::new(ribbon, labels, marking, metric)
    }

    /// Canonical renumbering: edges in distinguished-cycle order from its
    /// marked flag, vertices in first-appearance order. Two presentations of
    /// the same treelike graph canonicalize identically.
    pub fn canonical(&self) -> Result<MarkedMetricRibbonGraph, GraphError> {
        if !self.classify().treelike {
            return Err(GraphError::NotTreelike);
        }
        let order = self.distinguished_order();
        if order.len() != self.ribbon.graph.n_edges() {
            return Err(GraphError::NotTreelike);
        }
        // Old flag -> new flag: k-th traversed edge becomes edge k, with the
        // traversed side as the even flag.
        let mut flag_map: BTreeMap<usize, usize> = BTreeMap::new();
        for (k, f) in order.iter().enumerate() {
            flag_map.insert(*f, 2 * k);
            flag_map.insert(*f ^ 1, 2 * k + 1);
        }
        let g = &self.ribbon.graph;
        let mut vertex_map: BTreeMap<usize, usize> = BTreeMap::new();
        for k in 0..g.n_flags() {
            let old = *flag_map
                .iter()
                .find(|(_, nf)| **nf == k)
                .expect("flag map is onto")
                .0;
            let v = g.vertex_of(old);
            let next_id = vertex_map.len();
            vertex_map.entry(v).or_insert(next_id);
        }
        let mut edges = Vec::with_capacity(g.n_edges());
        let mut metric = Vec::with_capacity(g.n_edges());
        for (k, f) in order.iter().enumerate() {
            debug_assert_eq!(flag_map[f], 2 * k);
            edges.push((vertex_map[&g.vertex_of(*f)], vertex_map[&g.vertex_of(*f ^ 1)]));
            metric.push(self.metric[f / 2].clone());
        }
        let graph = Graph::new(vertex_map.len(), &edges)?;
        let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); vertex_map.len()];
        for (old_v, new_v) in &vertex_map {
            let rot = self.ribbon.rotation(*old_v);
            // Start the listed rotation at the least new flag for determinism.
            let mapped: Vec<usize> = rot.iter().map(|f| flag_map[f]).collect();
            let start = mapped
                .iter()
                .enumerate()
                .min_by_key(|(_, f)| **f)
                .map(|(i, _)| i)
                .unwrap();
            let mut r = mapped[start..].to_vec();
            r.extend_from_slice(&mapped[..start]);
            rotations[*new_v] = r;
        }
        let ribbon = RibbonGraph::new(graph, &rotations)?;
        let old_cycles = self.ribbon.cycles();
        let inverse_flag: BTreeMap<usize, usize> =
            flag_map.iter().map(|(o, n)| (*n, *o)).collect();
        let cycles = ribbon.cycles();
        let mut labels = Vec::with_capacity(cycles.len());
        let mut marking = Vec::with_capacity(cycles.len());
        for cyc in &cycles {
            let lift = inverse_flag[&cyc[0]];
            let old_k = old_cycles.iter().position(|c| c.contains(&lift)).unwrap();
            labels.push(self.labels[old_k]);
            marking.push(flag_map[&self.marking[old_k]]);
        }
        MarkedMetricRibbonGraph::new(ribbon, labels, marking, metric)
    }
}

// ---------------------------------------------------------------------------
// Cactus bridge
// ---------------------------------------------------------------------------

// A lobe boundary point during graph construction: a real attachment site or
// a valence-2 point introduced by a local zero inside an arc.
enum Boundary<'a> {
    Attach(&'a Site),
    LocalZero,
}

struct ArcRec {
    label: usize,
    start: usize,
    end: usize,
    len: Q,
}

/// Converts a cactus to its marked metric ribbon graph. Edges are the arcs in
/// perimeter order (after splitting at local zeros lying inside arcs); the
/// even flag of each edge is the side traversed by the distinguished cycle.
pub fn to_ribbon(c: &Cactus) -> Result<MarkedMetricRibbonGraph, GraphError> {
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(GraphError::IncompatibleShape(violations.join("; ")));
    }

    // Per lobe we track the arc indices in perimeter order and the arc ending
    // at the local zero (absent when the local zero is the entry point).
    struct Ctx<'a> {
        arcs: Vec<ArcRec>,
        n_vertices: usize,
        lobe_arcs: BTreeMap<usize, Vec<usize>>,
        zero_arc: BTreeMap<usize, usize>,
        spines: &'a BTreeMap<usize, Q>,
    }

    fn walk_site(site: &Site, vertex: usize, ctx: &mut Ctx) {
        for lobe in &site.lobes {
            walk_lobe(lobe, vertex, ctx);
        }
    }

    fn walk_lobe(lobe: &Lobe, entry: usize, ctx: &mut Ctx) {
        // Split arcs at the local zero when it falls strictly inside one.
        let sigma = ctx.spines.get(&lobe.label).cloned();
        let mut pieces: Vec<(Q, Boundary)> = Vec::new();
        let mut acc = Q::zero();
        let mut zero_after_piece: Option<usize> = None;
        for (t, len) in lobe.arcs.iter().enumerate() {
            let end = acc.clone() + len;
            let boundary = if t < lobe.sites.len() {
                Boundary::Attach(&lobe.sites[t])
            } else {
                Boundary::Attach(&EMPTY_SITE)
            };
            match &sigma {
                Some(s) if *s > acc && *s < end => {
                    pieces.push((s.clone() - &acc, Boundary::LocalZero));
                    zero_after_piece = Some(pieces.len() - 1);
                    pieces.push((end.clone() - s, boundary));
                }
                Some(s) if *s == end && t < lobe.arcs.len() - 1 => {
                    pieces.push((len.clone(), boundary));
                    zero_after_piece = Some(pieces.len() - 1);
                }
                _ => pieces.push((len.clone(), boundary)),
            }
            acc = end;
        }
        // The final boundary is the entry point itself; a local zero at the
        // entry (offset 0) needs no extra vertex and no zero arc.
        let mut cur = entry;
        ctx.lobe_arcs.entry(lobe.label).or_default();
        let n_pieces = pieces.len();
        for (k, (len, boundary)) in pieces.into_iter().enumerate() {
            let arc_idx = ctx.arcs.len();
            let end_vertex = if k + 1 == n_pieces {
                entry
            } else {
                let v = ctx.n_vertices;
                ctx.n_vertices += 1;
                v
            };
            ctx.arcs.push(ArcRec { label: lobe.label, start: cur, end: end_vertex, len });
            ctx.lobe_arcs.get_mut(&lobe.label).unwrap().push(arc_idx);
            if zero_after_piece == Some(k) {
                ctx.zero_arc.insert(lobe.label, arc_idx);
            }
            if let Boundary::Attach(site) = boundary {
                if !site.lobes.is_empty() {
                    walk_site(site, end_vertex, ctx);
                }
            }
            cur = end_vertex;
        }
    }

    static EMPTY_SITE: Site = Site { lobes: Vec::new() };

    let mut ctx = Ctx {
        arcs: Vec::new(),
        n_vertices: 1, // vertex 0 is the global zero
        lobe_arcs: BTreeMap::new(),
        zero_arc: BTreeMap::new(),
        spines: &c.spines,
    };
    walk_site(&c.root, 0, &mut ctx);
    let Ctx { arcs, n_vertices, lobe_arcs, zero_arc, .. } = ctx;

    let n_edges = arcs.len();
    let edges: Vec<(usize, usize)> = arcs.iter().map(|a| (a.start, a.end)).collect();
    let graph = Graph::new(n_vertices, &edges)?;

    // The face permutation is known outright: outer flags follow the
    // perimeter, inner flags run each lobe backwards. The vertex rotation is
    // its composite with the involution.
    let mut face = vec![usize::MAX; 2 * n_edges];
    for k in 0..n_edges {
        face[2 * k] = 2 * ((k + 1) % n_edges);
    }
    for arc_list in lobe_arcs.values() {
        let m = arc_list.len();
        for (j, arc) in arc_list.iter().enumerate() {
            let prev = arc_list[(j + m - 1) % m];
            face[2 * arc + 1] = 2 * prev + 1;
        }
    }
    let mut rotations: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    let mut placed = vec![false; n_vertices];
    for x in 0..2 * n_edges {
        let v = graph.vertex_of(x);
        if placed[v] {
            continue;
        }
        placed[v] = true;
        let mut rot = Vec::new();
        let mut y = x;
        loop {
            rot.push(y);
            y = face[y ^ 1];
            if y == x {
                break;
            }
        }
        rotations[v] = rot;
    }
    let ribbon = RibbonGraph::new(graph, &rotations)?;

    let cycles = ribbon.cycles();
    let mut labels = Vec::with_capacity(cycles.len());
    let mut marking = Vec::with_capacity(cycles.len());
    for cyc in &cycles {
        let f = cyc[0];
        if f % 2 == 0 {
            labels.push(0);
            marking.push(0);
        } else {
            let label = arcs[f / 2].label;
            labels.push(label);
            let mk_arc = match zero_arc.get(&label) {
                Some(a) => *a,
                None => *lobe_arcs[&label].last().unwrap(),
            };
            marking.push(2 * mk_arc + 1);
        }
    }
    let metric: Vec<Q> = arcs.iter().map(|a| a.len.clone()).collect();
    MarkedMetricRibbonGraph::new(ribbon, labels, marking, metric)
}

/// Reads a cactus back from a treelike marked metric ribbon graph. The target
/// variety must be compatible: normalized varieties need unit cycle lengths,
/// spineless ones need the graph to classify as spineless.
pub fn from_ribbon(
    g: &MarkedMetricRibbonGraph,
    variety: Variety,
) -> Result<Cactus, GraphError> {
    let class = g.classify();
    if !class.treelike {
        return Err(GraphError::NotTreelike);
    }
    if variety.normalized() && !class.normalized {
        return Err(GraphError::IncompatibleShape("normalized cycle lengths".into()));
    }
    if !variety.spined() && !class.spineless {
        return Err(GraphError::IncompatibleShape("spineless markings".into()));
    }
    if g.n() == 0 {
        return Err(GraphError::IncompatibleShape("at least one labelled cycle".into()));
    }

    let mut raw: Vec<(usize, Q)> = Vec::new();
    let order = g.distinguished_order();
    let cycles = g.ribbon.cycles();
    let cycle_of = |f: usize| cycles.iter().position(|c| c.contains(&f)).unwrap();
    for f in &order {
        let k = cycle_of(*f ^ 1);
        let label = g.labels[k];
        if label == 0 {
            return Err(GraphError::IncompatibleShape(
                "an edge traversed twice by the distinguished cycle".into(),
            ));
        }
        raw.push((label, g.metric[f / 2].clone()));
    }

    let mut spines: BTreeMap<usize, Q> = BTreeMap::new();
    if variety.spined() {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        let mut offsets: BTreeMap<usize, Q> = BTreeMap::new();
        for f in &order {
            let k = cycle_of(*f ^ 1);
            let label = g.labels[k];
            let len = g.metric[f / 2].clone();
            let a = acc.entry(label).or_insert_with(Q::zero);
            if g.marking[k] == (*f ^ 1) {
                offsets.insert(label, a.clone() + &len);
            }
            *a += len;
        }
        for label in 1..=g.n() {
            let r = acc.get(&label).cloned().unwrap_or_else(Q::zero);
            if r.is_zero() {
                return Err(GraphError::IncompatibleShape(format!(
                    "cycle {label} is never reached by the distinguished cycle"
                )));
            }
            let raw_off = offsets.get(&label).cloned().unwrap_or_else(Q::zero);
            spines.insert(label, rem_euclid(&raw_off, &r));
        }
    }

    // Same-label adjacencies arise exactly at valence-2 points; merging them
    // undoes the split made by to_ribbon.
    let mut word: Vec<(usize, Q)> = Vec::new();
    for (label, len) in raw {
        match word.last_mut() {
            Some((l, acc)) if *l == label => *acc += len,
            _ => word.push((label, len)),
        }
    }
    Ok(Cactus::from_word(variety, &word, &spines)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn loop_graph() -> RibbonGraph {
        let g = Graph::new(1, &[(0, 0)]).unwrap();
        RibbonGraph::new(g, &[vec![0, 1]]).unwrap()
    }

    fn theta(planar: bool) -> RibbonGraph {
        let g = Graph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let rot1 = if planar { vec![5, 3, 1] } else { vec![1, 3, 5] };
        RibbonGraph::new(g, &[vec![0, 2, 4], rot1]).unwrap()
    }

    #[test]
    fn valency_one_is_rejected() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(matches!(
            RibbonGraph::new(g, &[vec![0], vec![1]]),
            Err(GraphError::LowValency(_, 1))
        ));
    }

    #[test]
    fn loop_graph_has_two_unit_cycles() {
        let r = loop_graph();
        let cycles = r.cycles();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 1));
        assert_eq!(r.genus().unwrap(), 0);
    }

    #[test]
    fn euler_count_against_orbit_oracle() {
        // Six hand-built graphs; the cycle counts come from direct orbit
        // enumeration, the genus from the Euler count. One case (the twisted
        // theta) separates the two candidate sign conventions.
        let r = loop_graph();
        assert_eq!((r.cycles().len(), r.genus().unwrap()), (2, 0));

        let r = theta(true);
        assert_eq!((r.cycles().len(), r.genus().unwrap()), (3, 0));

        let r = theta(false);
        assert_eq!((r.cycles().len(), r.genus().unwrap()), (1, 1));

        // Two parallel edges.
        let g = Graph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let banana = RibbonGraph::new(g, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert_eq!((banana.cycles().len(), banana.genus().unwrap()), (2, 0));

        // Wedge of two circles, planar rotation.
        let g = Graph::new(1, &[(0, 0), (0, 0)]).unwrap();
        let r = RibbonGraph::new(g, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!((r.cycles().len(), r.genus().unwrap()), (3, 0));

        // Wedge of two circles, interleaved rotation.
        let g = Graph::new(1, &[(0, 0), (0, 0)]).unwrap();
        let r = RibbonGraph::new(g, &[vec![0, 2, 1, 3]]).unwrap();
        assert_eq!((r.cycles().len(), r.genus().unwrap()), (1, 1));
    }

    #[test]
    fn cycles_partition_the_flags() {
        for r in [theta(true), theta(false), loop_graph()] {
            let mut all: Vec<usize> = r.cycles().into_iter().flatten().collect();
            all.sort_unstable();
            assert_eq!(all, (0..r.graph.n_flags()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn disconnected_genus_errors() {
        let g = Graph::new(2, &[(0, 0), (1, 1)]).unwrap();
        let r = RibbonGraph::new(g, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(matches!(r.genus(), Err(GraphError::NotConnected)));
    }

    fn banana_mmrg() -> MarkedMetricRibbonGraph {
        // Distinguished cycle {0,3}, other cycle {1,2}; vertex 1 is a
        // valence-2 point of the labelled cycle, so it must carry a marking.
        let g = Graph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let r = RibbonGraph::new(g, &[vec![0, 2], vec![1, 3]]).unwrap();
        MarkedMetricRibbonGraph::new(r, vec![0, 1], vec![0, 1], vec![q(1, 3), q(2, 3)])
            .unwrap()
    }

    #[test]
    fn marking_must_lie_on_its_cycle() {
        let g = Graph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let r = RibbonGraph::new(g, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(matches!(
            MarkedMetricRibbonGraph::new(r, vec![0, 1], vec![1, 0], vec![qi(1), qi(1)]),
            Err(GraphError::BadMarking(_))
        ));
    }

    #[test]
    fn metric_must_be_positive() {
        let g = Graph::new(2, &[(0, 1), (0, 1)]).unwrap();
        let r = RibbonGraph::new(g, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(matches!(
            MarkedMetricRibbonGraph::new(r, vec![0, 1], vec![0, 1], vec![qi(1), qi(0)]),
            Err(GraphError::BadMetric(1))
        ));
    }

    #[test]
    fn banana_is_a_one_lobe_cactus_with_spine() {
        let g = banana_mmrg();
        let class = g.classify();
        assert!(class.treelike);
        assert!(!class.spineless);
        assert!(class.normalized);
        let c = from_ribbon(&g, Variety::Cacti1).unwrap();
        assert_eq!(c.n(), 1);
        assert_eq!(c.word(), vec![(1, qi(1))]);
        assert_eq!(c.spines[&1], q(1, 3));
    }

    #[test]
    fn contract_banana_to_loop() {
        let g = banana_mmrg();
        let before_cycles = g.ribbon.cycles().len();
        let h = g.contract_edge(0).unwrap();
        assert_eq!(h.ribbon.graph.n_vertices(), 1);
        assert_eq!(h.ribbon.graph.n_edges(), 1);
        assert_eq!(h.ribbon.cycles().len(), before_cycles);
        assert_eq!(h.ribbon.genus().unwrap(), 0);
        // Both markings sat on the contracted edge and move to their cycle
        // successors, which are the two flags of the surviving edge.
        assert_eq!(h.marked_flag(0), Some(1));
        assert_eq!(h.marked_flag(1), Some(0));
        // With markings already on the surviving edge they stay put.
        let g2 = MarkedMetricRibbonGraph::new(
            g.ribbon.clone(),
            vec![0, 1],
            vec![3, 2],
            vec![q(1, 3), q(2, 3)],
        )
        .unwrap();
        let h2 = g2.contract_edge(0).unwrap();
        // Old flags 2,3 renumber to 0,1.
        assert_eq!(h2.marked_flag(0), Some(1));
        assert_eq!(h2.marked_flag(1), Some(0));
    }

    #[test]
    fn loop_contraction_is_rejected() {
        let c = Cactus::single(Variety::Cact1, qi(1), None).unwrap();
        let g = to_ribbon(&c).unwrap();
        assert!(matches!(g.contract_edge(0), Err(GraphError::LoopContraction(0))));
    }

    #[test]
    fn one_lobe_cactus_image() {
        let c = Cactus::single(Variety::Cact1, qi(1), None).unwrap();
        let g = to_ribbon(&c).unwrap();
        assert_eq!(g.ribbon.graph.n_vertices(), 1);
        assert_eq!(g.ribbon.graph.n_edges(), 1);
        assert_eq!(g.ribbon.cycles().len(), 2);
        let class = g.classify();
        assert!(class.treelike && class.spineless && class.normalized);
        assert_eq!(from_ribbon(&g, Variety::Cact1).unwrap(), c);
    }

    #[test]
    fn corolla_image_classifies_fully() {
        let c = Cactus::corolla(Variety::Cact1, &[qi(1), qi(1)]).unwrap();
        let g = to_ribbon(&c).unwrap();
        let class = g.classify();
        assert!(class.treelike && class.spineless && class.normalized);
        // Doubling one arc length breaks only normalization.
        let mut g2 = g.clone();
        g2.metric[0] = qi(2);
        let class2 = g2.classify();
        assert!(class2.treelike && class2.spineless && !class2.normalized);
    }

    #[test]
    fn genus_one_graph_is_not_treelike() {
        let r = theta(false);
        // Single cycle; label it 0 and mark any flag.
        let m =
            MarkedMetricRibbonGraph::new(r, vec![0], vec![0], vec![qi(1), qi(1), qi(1)])
                .unwrap();
        assert!(!m.classify().treelike);
    }

    #[test]
    fn round_trips_across_varieties() {
        let mut cases: Vec<Cactus> = Vec::new();
        cases.push(Cactus::single(Variety::Cact, q(5, 2), None).unwrap());
        cases.push(Cactus::single(Variety::Cacti, q(5, 2), Some(q(3, 4))).unwrap());
        cases.push(Cactus::corolla(Variety::Cact1, &[qi(1), qi(1)]).unwrap());
        // Chain with a spine inside an arc and one exactly at a site.
        let word = [(1, q(1, 3)), (2, qi(1)), (1, q(2, 3))];
        let mut spines = BTreeMap::new();
        spines.insert(1, q(1, 2));
        spines.insert(2, q(1, 3));
        cases.push(Cactus::from_word(Variety::Cacti1, &word, &spines).unwrap());
        let mut spines = BTreeMap::new();
        spines.insert(1, q(1, 3));
        spines.insert(2, qi(0));
        cases.push(Cactus::from_word(Variety::Cacti1, &word, &spines).unwrap());
        // Deeper nesting with a shared site.
        let word = [
            (1, q(1, 2)),
            (2, q(1, 2)),
            (3, qi(1)),
            (2, q(1, 2)),
            (4, qi(2)),
            (1, q(1, 2)),
        ];
        cases.push(Cactus::from_word(Variety::Cact, &word, &BTreeMap::new()).unwrap());

        for c in cases {
            let g = to_ribbon(&c).unwrap();
            assert!(g.classify().treelike, "image must be treelike");
            let back = from_ribbon(&g, c.variety).unwrap();
            assert_eq!(back, c);
        }
    }

    #[test]
    fn spine_split_creates_marked_valence_two_vertex() {
        let c = Cactus::single(Variety::Cacti1, qi(1), Some(q(1, 3))).unwrap();
        let g = to_ribbon(&c).unwrap();
        assert_eq!(g.ribbon.graph.n_vertices(), 2);
        assert_eq!(g.ribbon.graph.n_edges(), 2);
        assert!(!g.classify().spineless);
        assert_eq!(from_ribbon(&g, Variety::Cacti1).unwrap(), c);
    }

    #[test]
    fn contraction_preserves_cycles_and_genus_on_cactus_images() {
        let word = [(1, q(1, 2)), (2, qi(1)), (3, qi(1)), (1, q(1, 2))];
        let c = Cactus::from_word(Variety::Cact, &word, &BTreeMap::new()).unwrap();
        let g = to_ribbon(&c).unwrap();
        for e in 0..g.ribbon.graph.n_edges() {
            let (u, v) = g.ribbon.graph.edges()[e];
            if u == v {
                continue;
            }
            let h = g.contract_edge(e).unwrap();
            assert_eq!(h.ribbon.graph.n_vertices(), g.ribbon.graph.n_vertices() - 1);
            assert_eq!(h.ribbon.graph.n_edges(), g.ribbon.graph.n_edges() - 1);
            assert_eq!(h.ribbon.cycles().len(), g.ribbon.cycles().len());
            assert_eq!(h.ribbon.genus().unwrap(), g.ribbon.genus().unwrap());
        }
    }

    #[test]
    fn to_ribbon_output_is_canonical() {
        let word = [(1, q(1, 3)), (2, qi(1)), (1, q(2, 3))];
        let c = Cactus::from_word(Variety::Cact, &word, &BTreeMap::new()).unwrap();
        let g = to_ribbon(&c).unwrap();
        assert_eq!(g.canonical().unwrap(), g);
    }

    #[test]
    fn canonical_identifies_presentations() {
        // The same one-lobe-with-spine graph entered with edges swapped.
        let g1 = banana_mmrg();
        let g = Graph::new(2, &[(1, 0), (1, 0)]).unwrap();
        let r = RibbonGraph::new(g, &[vec![1, 3], vec![2, 0]]).unwrap();
        let g2 =
            MarkedMetricRibbonGraph::new(r, vec![1, 0], vec![3, 2], vec![q(2, 3), q(1, 3)])
                .unwrap();
        assert_ne!(g1, g2);
        assert_eq!(g1.canonical().unwrap(), g2.canonical().unwrap());
    }
}
