//! Alternative exact views of a cactus: the weighted dual tree, the
//! black-and-white tree, chord diagrams on the outer circle together with
//! their completions, and weighted arc families on the associated surface.
//! Each view converts back; the converters are mutually inverse on the
//! stated domains.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cactus::{canonicalize_word, Cactus, CactusError, Lobe, Site, TopType, Variety};
use crate::cells::{homology_of, square_offender, Homology};
use crate::rational::{fmt_q, Q};

/// One lobe of the dual tree: radius, optional local-zero offset, and the
/// children in counterclockwise order, each preceded by the arc length
/// separating its attachment point from the previous one on this lobe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtNode {
    pub label: usize,
    pub radius: Q,
    pub spine: Option<Q>,
    pub children: Vec<(Q, DtNode)>,
}

/// Weighted planted forest equivalent to a cactus. Lobes touching the
/// global zero appear as roots in counterclockwise order; a zero edge
/// weight attaches a child at the same point as its predecessor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualTree {
    pub variety: Variety,
    pub roots: Vec<DtNode>,
}

pub fn dual_tree(c: &Cactus) -> DualTree {
    fn node_of(lobe: &Lobe, c: &Cactus) -> DtNode {
        let mut children = Vec::new();
        for (t, site) in lobe.sites.iter().enumerate() {
            for (k, sub) in site.lobes.iter().enumerate() {
                let w = if k == 0 { lobe.arcs[t].clone() } else { Q::zero() };
                children.push((w, node_of(sub, c)));
            }
        }
        let spine = if c.variety.spined() {
            Some(c.spines.get(&lobe.label).cloned().unwrap_or_else(Q::zero))
        } else {
            None
        };
        DtNode { label: lobe.label, radius: lobe.radius(), spine, children }
    }
    DualTree {
        variety: c.variety,
        roots: c.root.lobes.iter().map(|l| node_of(l, c)).collect(),
    }
}

pub fn from_dual_tree(t: &DualTree) -> Result<Cactus, CactusError> {
    fn emit(
        node: &DtNode,
        spined: bool,
        word: &mut Vec<(usize, Q)>,
        spines: &mut BTreeMap<usize, Q>,
    ) -> Result<(), CactusError> {
        match (&node.spine, spined) {
            (Some(s), true) => {
                spines.insert(node.label, s.clone());
            }
            (None, false) => {}
            (Some(_), false) => {
                return Err(CactusError::SpineMismatch(format!(
                    "lobe {} carries a spine in a spineless variety",
                    node.label
                )));
            }
            (None, true) => {
                return Err(CactusError::SpineMismatch(format!(
                    "lobe {} is missing its spine offset",
                    node.label
                )));
            }
        }
        if !node.radius.is_positive() {
            return Err(CactusError::Invalid(format!(
                "lobe {} must have positive radius",
                node.label
            )));
        }
        let mut used = Q::zero();
        for (w, child) in &node.children {
            if w.is_negative() {
                return Err(CactusError::Invalid(format!(
                    "edge into lobe {} has negative weight",
                    child.label
                )));
            }
            word.push((node.label, w.clone()));
            used += w;
            emit(child, spined, word, spines)?;
        }
        if used >= node.radius {
            return Err(CactusError::Invalid(format!(
                "children of lobe {} sit at arc distances summing to {}, which fills its radius {}",
                node.label,
                fmt_q(&used),
                fmt_q(&node.radius)
            )));
        }
        word.push((node.label, &node.radius - &used));
        Ok(())
    }

    if t.roots.is_empty() {
        return Err(CactusError::EmptyWord);
    }
    let mut word = Vec::new();
    let mut spines = BTreeMap::new();
    for r in &t.roots {
        emit(r, t.variety.spined(), &mut word, &mut spines)?;
    }
    let word = canonicalize_word(&word)?;
    Cactus::from_word(t.variety, &word, &spines)
}

/// The shape plus the arc lengths in planted order: what remains of the
/// dual tree after forgetting which black vertices are non-root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BwTree {
    pub toptype: TopType,
    pub lengths: Vec<Q>,
}

pub fn bw_tree(c: &Cactus) -> BwTree {
    BwTree {
        toptype: c.toptype(),
        lengths: c.word().into_iter().map(|(_, w)| w).collect(),
    }
}

/// An oriented chord: the lobe it closes and the indices into the marked
/// point list of its first and last perimeter position. `to == 0` means
/// the lobe ends back at the global zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chord {
    pub label: usize,
    pub from: usize,
    pub to: usize,
}

/// A circle of circumference `total` with the identified perimeter
/// positions marked. Position 0 is always marked. Every lobe stores one
/// chord except a lone lobe at the global zero, whose two ends coincide
/// at the mark 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChordDiagram {
    pub variety: Variety,
    pub total: Q,
    pub points: Vec<Q>,
    pub chords: Vec<Chord>,
    pub spine_marks: BTreeMap<usize, Q>,
    pub reduced: bool,
}

pub fn chord_diagram(c: &Cactus) -> ChordDiagram {
    struct Walk<'a> {
        c: &'a Cactus,
        spined: bool,
        begin: BTreeMap<usize, Q>,
        end: BTreeMap<usize, Q>,
        marks: BTreeMap<usize, Q>,
    }
    // `pos` runs along the perimeter; marks record the first pass of each
    // spine point, so site marks are placed before descending.
    fn walk(site: &Site, pos: &mut Q, st: &mut Walk) {
        let arrival = pos.clone();
        for lobe in &site.lobes {
            st.begin.insert(lobe.label, pos.clone());
            let spine = if st.spined {
                st.c.spines.get(&lobe.label).cloned().unwrap_or_else(Q::zero)
            } else {
                Q::zero()
            };
            if st.spined && spine.is_zero() {
                st.marks.insert(lobe.label, arrival.clone());
            }
            let mut own = Q::zero();
            for (t, sub) in lobe.sites.iter().enumerate() {
                let next = &own + &lobe.arcs[t];
                if st.spined && spine > own && spine < next {
                    st.marks.insert(lobe.label, &*pos + (&spine - &own));
                }
                *pos += &lobe.arcs[t];
                own = next;
                if st.spined && !spine.is_zero() && spine == own {
                    st.marks.insert(lobe.label, pos.clone());
                }
                walk(sub, pos, st);
            }
            let closing = lobe.arcs.last().expect("a lobe always has a closing arc");
            if st.spined && spine > own {
                st.marks.insert(lobe.label, &*pos + (&spine - &own));
            }
            *pos += closing;
            st.end.insert(lobe.label, pos.clone());
        }
    }

    let mut st = Walk {
        c,
        spined: c.variety.spined(),
        begin: BTreeMap::new(),
        end: BTreeMap::new(),
        marks: BTreeMap::new(),
    };
    let mut pos = Q::zero();
    walk(&c.root, &mut pos, &mut st);
    let total = pos;

    let wrap = |x: &Q| if *x == total { Q::zero() } else { x.clone() };
    let mut set: BTreeSet<Q> = BTreeSet::new();
    set.insert(Q::zero());
    for b in st.begin.values() {
        set.insert(b.clone());
    }
    for e in st.end.values() {
        set.insert(wrap(e));
    }
    let points: Vec<Q> = set.into_iter().collect();
    let idx = |x: &Q| points.binary_search(x).expect("identified points are marked");

    let mut chords = Vec::new();
    for label in 1..=c.n() {
        let b = &st.begin[&label];
        let e = wrap(&st.end[&label]);
        if *b == e {
            continue;
        }
        chords.push(Chord { label, from: idx(b), to: idx(&e) });
    }
    ChordDiagram {
        variety: c.variety,
        total,
        points,
        chords,
        spine_marks: st.marks,
        reduced: false,
    }
}

pub fn from_chord_diagram(d: &ChordDiagram) -> Result<Cactus, CactusError> {
    if d.reduced {
        return Err(CactusError::Invalid(
            "a reduced diagram is a view and cannot be inverted; keep the full diagram".into(),
        ));
    }
    if !d.total.is_positive() {
        return Err(CactusError::Invalid("circle length must be positive".into()));
    }
    match d.points.first() {
        Some(p) if p.is_zero() => {}
        _ => {
            return Err(CactusError::Invalid(
                "the global zero must be the first marked point".into(),
            ));
        }
    }
    if d.points.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CactusError::Invalid("marked points must strictly increase".into()));
    }
    if d.points.last().unwrap() >= &d.total {
        return Err(CactusError::Invalid("marked points must lie inside the circle".into()));
    }

    struct Iv {
        label: usize,
        b: Q,
        e: Q,
    }
    let mut labels = BTreeSet::new();
    let mut ivs: Vec<Iv> = Vec::with_capacity(d.chords.len());
    for ch in &d.chords {
        if ch.from >= d.points.len() || ch.to >= d.points.len() {
            return Err(CactusError::Invalid(format!(
                "chord {} references an unmarked point",
                ch.label
            )));
        }
        if ch.from == ch.to {
            return Err(CactusError::Invalid(format!(
                "chord {} must pair two distinct points",
                ch.label
            )));
        }
        if !labels.insert(ch.label) {
            return Err(CactusError::Invalid(format!("lobe {} has two chords", ch.label)));
        }
        let b = d.points[ch.from].clone();
        let e = if ch.to == 0 { d.total.clone() } else { d.points[ch.to].clone() };
        if e <= b {
            return Err(CactusError::Invalid(format!(
                "chord {} runs against the circle orientation",
                ch.label
            )));
        }
        ivs.push(Iv { label: ch.label, b, e });
    }
    for i in 1..d.points.len() {
        if !d.chords.iter().any(|c| c.from == i || c.to == i) {
            return Err(CactusError::Invalid(format!("marked point {i} touches no chord")));
        }
    }

    // Nesting forest of the chord spans. A strict partial overlap means
    // the chords cross and no planar cactus produces the diagram.
    ivs.sort_by(|x, y| x.b.cmp(&y.b).then(y.e.cmp(&x.e)).then(x.label.cmp(&y.label)));
    struct Node {
        label: usize,
        b: Q,
        e: Q,
        children: Vec<Node>,
    }
    fn close(stack: &mut Vec<Node>, tops: &mut Vec<Node>) {
        let done = stack.pop().expect("close needs a node");
        match stack.last_mut() {
            Some(p) => p.children.push(done),
            None => tops.push(done),
        }
    }
    let mut stack: Vec<Node> = Vec::new();
    let mut tops: Vec<Node> = Vec::new();
    for iv in ivs {
        loop {
            match stack.last() {
                Some(top) if top.e <= iv.b => close(&mut stack, &mut tops),
                Some(top) if iv.e > top.e => {
                    return Err(CactusError::Invalid(format!(
                        "chords {} and {} cross",
                        top.label, iv.label
                    )));
                }
                _ => break,
            }
        }
        stack.push(Node { label: iv.label, b: iv.b, e: iv.e, children: Vec::new() });
    }
    while !stack.is_empty() {
        close(&mut stack, &mut tops);
    }

    // Either the top spans tile the whole circle (the base cycle) or the
    // one label without a chord is the lone lobe at the global zero.
    let m = d.chords.len();
    let tiles = !tops.is_empty()
        && tops[0].b.is_zero()
        && tops.last().unwrap().e == d.total
        && tops.windows(2).all(|w| w[0].e == w[1].b);
    let roots = if tiles {
        let want: BTreeSet<usize> = (1..=m).collect();
        if labels != want {
            return Err(CactusError::Invalid(
                "chords tile the whole circle, so labels must be exactly 1..=n".into(),
            ));
        }
        tops
    } else {
        let n = m + 1;
        let missing: Vec<usize> = (1..=n).filter(|l| !labels.contains(l)).collect();
        if missing.len() != 1 {
            return Err(CactusError::Invalid(format!(
                "chord labels must be 1..={n} with exactly one label absent, missing {missing:?}"
            )));
        }
        vec![Node { label: missing[0], b: Q::zero(), e: d.total.clone(), children: tops }]
    };

    fn emit(node: &Node, out: &mut Vec<(usize, Q)>) {
        let mut at = node.b.clone();
        for ch in &node.children {
            out.push((node.label, &ch.b - &at));
            emit(ch, out);
            at = ch.e.clone();
        }
        out.push((node.label, &node.e - &at));
    }
    let mut raw = Vec::new();
    for r in &roots {
        emit(r, &mut raw);
    }

    let mut spines = BTreeMap::new();
    if d.variety.spined() {
        struct Info {
            b: Q,
            e: Q,
            arrival: Q,
            children: Vec<(Q, Q)>,
        }
        // arrival = position of the first pass of a lobe's attachment
        // point: the begin of the head of its same-point sibling run
        fn index(node: &Node, arrival: Q, map: &mut BTreeMap<usize, Info>) {
            let mut prev_end: Option<Q> = None;
            let mut head = Q::zero();
            for ch in &node.children {
                head = match &prev_end {
                    Some(pe) if *pe == ch.b => head,
                    _ => ch.b.clone(),
                };
                prev_end = Some(ch.e.clone());
                index(ch, head.clone(), map);
            }
            map.insert(
                node.label,
                Info {
                    b: node.b.clone(),
                    e: node.e.clone(),
                    arrival,
                    children: node.children.iter().map(|c| (c.b.clone(), c.e.clone())).collect(),
                },
            );
        }
        let mut map = BTreeMap::new();
        let mut prev_end: Option<Q> = None;
        let mut head = Q::zero();
        for r in &roots {
            head = match &prev_end {
                Some(pe) if *pe == r.b => head,
                _ => r.b.clone(),
            };
            prev_end = Some(r.e.clone());
            index(r, head.clone(), &mut map);
        }

        for (u, mark) in &d.spine_marks {
            let info = map.get(u).ok_or(CactusError::NoSuchLobe(*u))?;
            if mark.is_negative() || *mark >= d.total {
                return Err(CactusError::OutOfRange(fmt_q(mark), fmt_q(&d.total)));
            }
            let s = if *mark == info.arrival {
                Q::zero()
            } else if *mark <= info.b || *mark >= info.e {
                return Err(CactusError::Invalid(format!(
                    "spine mark of lobe {} at {} is not on that lobe's first pass",
                    u,
                    fmt_q(mark)
                )));
            } else {
                let mut s = mark - &info.b;
                for (cb, ce) in &info.children {
                    if mark > cb && mark < ce {
                        return Err(CactusError::Invalid(format!(
                            "spine mark of lobe {u} sits on a descendant lobe"
                        )));
                    }
                    if mark == ce {
                        return Err(CactusError::Invalid(format!(
                            "spine mark of lobe {} at {} is a later pass of an intersection; mark the first pass",
                            u,
                            fmt_q(mark)
                        )));
                    }
                    if ce <= mark {
                        s -= ce - cb;
                    }
                }
                s
            };
            spines.insert(*u, s);
        }
    } else if !d.spine_marks.is_empty() {
        return Err(CactusError::SpineMismatch("spine marks on a spineless variety".into()));
    }

    let word = canonicalize_word(&raw)?;
    Cactus::from_word(d.variety, &word, &spines)
}

/// Deletes the chord of the base cycle that starts at the global zero and
/// flags the result, which is a view and no longer invertible. Diagrams
/// without a base cycle come back unchanged.
pub fn reduce(d: &ChordDiagram) -> ChordDiagram {
    let mut out = d.clone();
    if let Some(k) = out.chords.iter().position(|c| c.from == 0) {
        out.chords.remove(k);
        out.reduced = true;
    }
    out
}

/// A cell of the completed diagram: a marked point on the cut circle, an
/// arc between neighbouring marks, or the face of an identification
/// simplex spanned by a point subset of one chain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CcdCell {
    Point(usize),
    Arc(usize),
    Face(usize, Vec<usize>),
}

/// The chord diagram cut open at the global zero, with a seam chord
/// joining the two cut ends and a simplex glued onto every chain of
/// chords. `points` ends with the left cut end at position `total`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletedChordDiagram {
    pub points: Vec<Q>,
    pub chains: Vec<Vec<usize>>,
    pub cells: Vec<Vec<CcdCell>>,
}

fn subsets_of_size(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let Some(stop) = items.len().checked_sub(size - cur.len()) else {
            return;
        };
        for i in start..=stop {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::with_capacity(size), &mut out);
    out
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

pub fn complete(d: &ChordDiagram) -> Result<CompletedChordDiagram, CactusError> {
    if d.reduced {
        return Err(CactusError::Invalid(
            "complete the full diagram, not the reduced view".into(),
        ));
    }
    let mut points = d.points.clone();
    points.push(d.total.clone());
    let last = points.len() - 1;
    let mut edges: Vec<(usize, usize)> = d
        .chords
        .iter()
        .map(|c| (c.from, if c.to == 0 { last } else { c.to }))
        .collect();
    edges.push((0, last));

    let mut dsu = Dsu::new(points.len());
    for (a, b) in &edges {
        dsu.union(*a, *b);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for p in 0..points.len() {
        groups.entry(dsu.find(p)).or_default().push(p);
    }
    let chains: Vec<Vec<usize>> = groups.into_values().filter(|g| g.len() >= 2).collect();

    let mut cells: Vec<Vec<CcdCell>> = Vec::new();
    cells.push((0..points.len()).map(CcdCell::Point).collect());
    let top = chains.iter().map(Vec::len).max().expect("the seam always forms a chain");
    for size in 2..=top {
        let mut level: Vec<CcdCell> = if size == 2 {
            (0..points.len() - 1).map(CcdCell::Arc).collect()
        } else {
            Vec::new()
        };
        for (ci, chain) in chains.iter().enumerate() {
            for subset in subsets_of_size(chain, size) {
                level.push(CcdCell::Face(ci, subset));
            }
        }
        cells.push(level);
    }
    Ok(CompletedChordDiagram { points, chains, cells })
}

pub fn ccd_homology(ccd: &CompletedChordDiagram) -> Homology {
    let counts: Vec<usize> = ccd.cells.iter().map(Vec::len).collect();
    // boundaries[k] maps dimension k to k-1; index 0 is a placeholder
    let mut boundaries: Vec<Vec<Vec<BigInt>>> = vec![Vec::new()];
    for k in 1..ccd.cells.len() {
        let index: HashMap<CcdCell, usize> =
            ccd.cells[k - 1].iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let mut mat = vec![vec![BigInt::from(0); ccd.cells[k].len()]; ccd.cells[k - 1].len()];
        for (j, cell) in ccd.cells[k].iter().enumerate() {
            match cell {
                CcdCell::Point(_) => unreachable!("points are 0-cells"),
                CcdCell::Arc(i) => {
                    mat[index[&CcdCell::Point(i + 1)]][j] += 1;
                    mat[index[&CcdCell::Point(*i)]][j] -= 1;
                }
                CcdCell::Face(ci, s) => {
                    for omit in 0..s.len() {
                        let mut rest = s.clone();
                        rest.remove(omit);
                        let target = if rest.len() == 1 {
                            CcdCell::Point(rest[0])
                        } else {
                            CcdCell::Face(*ci, rest)
                        };
                        let sign = if omit % 2 == 0 { 1 } else { -1 };
                        mat[index[&target]][j] += sign;
                    }
                }
            }
        }
        boundaries.push(mat);
    }
    if let Some((k, col, row)) = square_offender(&boundaries) {
        panic!("boundary squared is nonzero: dimension {k}, cell {col}, against cell {row}");
    }
    homology_of(&counts, &boundaries)
}

/// Skeleton the completed diagram retracts onto: the marked points, a
/// barycenter per chain, the outside arcs, and one edge from each
/// barycenter to every point of its chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpineGraph {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn spine(ccd: &CompletedChordDiagram) -> SpineGraph {
    let np = ccd.points.len();
    let mut edges = Vec::new();
    for i in 0..np - 1 {
        edges.push((i, i + 1));
    }
    for (ci, chain) in ccd.chains.iter().enumerate() {
        for p in chain {
            edges.push((*p, np + ci));
        }
    }
    SpineGraph { vertices: np + ccd.chains.len(), edges }
}

pub fn first_betti(g: &SpineGraph) -> usize {
    let mut dsu = Dsu::new(g.vertices);
    for (a, b) in &g.edges {
        dsu.union(*a, *b);
    }
    let comps = (0..g.vertices).filter(|v| dsu.find(*v) == *v).count();
    g.edges.len() + comps - g.vertices
}

/// One band of parallel arcs: the lobe boundary it lands on and its width.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Band {
    pub lobe: usize,
    pub weight: Q,
}

/// Weighted arcs on a genus-zero surface with boundaries 0..=n, every arc
/// running from boundary 0 to the boundary of one lobe. `bands` lists the
/// endpoint order along boundary 0 from its marked point; `order_at[i-1]`
/// lists band indices in endpoint order along boundary i from its marked
/// point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcFamily {
    pub variety: Variety,
    pub n: usize,
    pub bands: Vec<Band>,
    pub order_at: Vec<Vec<usize>>,
}

pub fn arc_embedding(c: &Cactus) -> ArcFamily {
    let spined = c.variety.spined();
    // Perimeter pieces, split where a spine point falls strictly inside an
    // arc; boundary 0 runs through them in reverse.
    let mut pieces: Vec<(usize, Q)> = Vec::new();
    let mut own: BTreeMap<usize, Q> = BTreeMap::new();
    for arc in c.perimeter() {
        let lo = own.get(&arc.label).cloned().unwrap_or_else(Q::zero);
        let hi = &lo + &arc.len;
        let s = if spined {
            c.spines.get(&arc.label).cloned().unwrap_or_else(Q::zero)
        } else {
            Q::zero()
        };
        if s > lo && s < hi {
            pieces.push((arc.label, &s - &lo));
            pieces.push((arc.label, &hi - &s));
        } else {
            pieces.push((arc.label, arc.len.clone()));
        }
        own.insert(arc.label, hi);
    }
    let m = pieces.len();
    let bands: Vec<Band> =
        pieces.iter().rev().map(|(l, w)| Band { lobe: *l, weight: w.clone() }).collect();

    let mut trav: Vec<Vec<(Q, usize)>> = vec![Vec::new(); c.n()];
    let mut off: Vec<Q> = vec![Q::zero(); c.n()];
    for (p, (l, w)) in pieces.iter().enumerate() {
        trav[*l - 1].push((off[*l - 1].clone(), m - 1 - p));
        off[*l - 1] += w;
    }
    let mut order_at = Vec::with_capacity(c.n());
    for (z, list) in trav.iter().enumerate() {
        let s = if spined {
            c.spines.get(&(z + 1)).cloned().unwrap_or_else(Q::zero)
        } else {
            Q::zero()
        };
        let k = list.iter().position(|(o, _)| *o == s).expect("splitting marks the local zero");
        let rotated: Vec<usize> =
            list[k..].iter().chain(list[..k].iter()).map(|(_, b)| *b).collect();
        order_at.push(rotated);
    }
    ArcFamily { variety: c.variety, n: c.n(), bands, order_at }
}

pub fn arc_to_cactus(a: &ArcFamily) -> Result<Cactus, CactusError> {
    if a.bands.is_empty() {
        return Err(CactusError::EmptyWord);
    }
    if a.order_at.len() != a.n {
        return Err(CactusError::Invalid(format!(
            "expected one endpoint order per lobe boundary, got {} for n = {}",
            a.order_at.len(),
            a.n
        )));
    }
    for b in &a.bands {
        if b.lobe == 0 || b.lobe > a.n {
            return Err(CactusError::Invalid(format!(
                "band lands on unknown boundary {}",
                b.lobe
            )));
        }
        if !b.weight.is_positive() {
            return Err(CactusError::Invalid(format!(
                "band weights must be positive, a band on boundary {} is not",
                b.lobe
            )));
        }
    }
    let m = a.bands.len();
    let word: Vec<(usize, Q)> = a.bands.iter().rev().map(|b| (b.lobe, b.weight.clone())).collect();
    let mut trav: Vec<Vec<usize>> = vec![Vec::new(); a.n];
    let mut starts: Vec<Vec<Q>> = vec![Vec::new(); a.n];
    let mut off: Vec<Q> = vec![Q::zero(); a.n];
    for (p, (l, w)) in word.iter().enumerate() {
        trav[*l - 1].push(m - 1 - p);
        starts[*l - 1].push(off[*l - 1].clone());
        off[*l - 1] += w;
    }
    let mut spines = BTreeMap::new();
    for i in 1..=a.n {
        let t = &trav[i - 1];
        if t.is_empty() {
            return Err(CactusError::NoSuchLobe(i));
        }
        let given = &a.order_at[i - 1];
        let k = match given.first().and_then(|g0| t.iter().position(|b| b == g0)) {
            Some(k) if given.len() == t.len() => k,
            _ => {
                return Err(CactusError::Invalid(format!(
                    "boundary {i}: endpoint order does not list this lobe's bands"
                )));
            }
        };
        let rotated: Vec<usize> = t[k..].iter().chain(t[..k].iter()).copied().collect();
        if rotated != *given {
            return Err(CactusError::Invalid(format!(
                "boundary {i}: endpoint order is not a rotation of the boundary-0 order"
            )));
        }
        if a.variety.spined() {
            if k > 0 {
                spines.insert(i, starts[i - 1][k].clone());
            }
        } else if k != 0 {
            return Err(CactusError::Invalid(format!(
                "boundary {i}: order must be anti-compatible with boundary 0 for a spineless cactus"
            )));
        }
    }
    let word = canonicalize_word(&word)?;
    Cactus::from_word(a.variety, &word, &spines)
}
