//! Seeded checkers behind `verify` and the criteria behind `selftest`. The
//! acceptance tests call the same functions, so the command line and the test
//! suite cannot drift apart.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use cacti_core::angle::Angle;
use cacti_core::cactus::{canonicalize_word, Cactus, TopType, Variety};
use cacti_core::cells::{
    build_complex, degenerate, enumerate_toptypes, fiber_types, gerstenhaber_cells, homology,
};
use cacti_core::compose::{
    angles_compose, associativity_counterexample, compose, contract_lobe, is_scc,
    perturbed_compose, scc_component_word, section_attach, spine_angles, twisted_compose,
    with_spine_angles, CactusOperad,
};
use cacti_core::diagrams::{
    arc_embedding, arc_to_cactus, ccd_homology, chord_diagram, complete, dual_tree,
    from_chord_diagram, from_dual_tree,
};
use cacti_core::graph::{from_ribbon, to_ribbon};
use cacti_core::operad::{
    block_permutation, check_associativity, check_equivariance, check_units, AngleOperad,
    ProductOperad, QuasiOperad, ScalingOperad,
};
use cacti_core::rational::{fmt_q, Q};
use cacti_core::sample::Sampler;
use num_traits::{One, Zero};

pub const VARIETIES: [Variety; 4] =
    [Variety::Cact1, Variety::Cact, Variety::Cacti1, Variety::Cacti];

/// Lines to show plus whether the expected outcome held.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub ok: bool,
}

impl Outcome {
    fn new() -> Outcome {
        Outcome { lines: Vec::new(), ok: true }
    }

    fn push(&mut self, line: String) {
        self.lines.push(line);
    }

    fn merge(&mut self, other: Outcome) {
        self.lines.extend(other.lines);
        self.ok &= other.ok;
    }
}

/// One line per cactus: the perimeter word, then the spines for spined
/// varieties, all exact.
pub fn brief(c: &Cactus) -> String {
    let mut out = String::new();
    for (k, (label, len)) in c.word().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{label}:{}", fmt_q(len));
    }
    if c.variety.spined() {
        out.push_str(";s=");
        let zero = Q::zero();
        for l in 1..=c.n() {
            if l > 1 {
                out.push(',');
            }
            out.push_str(&fmt_q(c.spines.get(&l).unwrap_or(&zero)));
        }
    }
    out
}

fn sample_cacti(s: &mut Sampler, variety: Variety, max_arity: usize) -> (Cactus, usize) {
    let n = s.slot(max_arity);
    (s.cactus(variety, n), n)
}

// ---------------------------------------------------------------------------
// The five axiom checkers behind `verify`
// ---------------------------------------------------------------------------

fn summary(axiom: &str, variety: Variety, checked: usize, violations: usize) -> String {
    format!(
        "axiom={axiom} variety={} samples={checked} violations={violations}",
        variety.name()
    )
}

/// Both orders of a double gluing, by the usual case law on the slots.
fn assoc_sides(
    variety: Variety,
    x: &Cactus,
    i: usize,
    y: &Cactus,
    j: usize,
    z: &Cactus,
) -> (Cactus, Cactus) {
    let op = CactusOperad(variety);
    let l = y.n();
    let lhs = op.compose(&op.compose(x, i, y), j, z);
    let rhs = if j < i {
        op.compose(&op.compose(x, j, z), i + z.n() - 1, y)
    } else if j < i + l {
        op.compose(x, i, &op.compose(y, j - i + 1, z))
    } else {
        op.compose(&op.compose(x, j - l + 1, z), i, y)
    };
    (lhs, rhs)
}

pub fn check_assoc(variety: Variety, samples: usize, seed: u64) -> Outcome {
    let mut s = Sampler::new(seed);
    let mut triples = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (x, n) = sample_cacti(&mut s, variety, 5);
        let (y, m) = sample_cacti(&mut s, variety, 5);
        let (z, _) = sample_cacti(&mut s, variety, 5);
        let i = s.slot(n);
        let j = s.slot(n + m - 1);
        triples.push((x, i, y, j, z));
    }
    let report = check_associativity(&CactusOperad(variety), &triples);
    let mut out = Outcome::new();
    out.push(summary("assoc", variety, report.checked, report.violations.len()));

    if variety.normalized() {
        // Normalized gluing reassociates only up to homotopy; the expected
        // outcome is a concrete counterexample, reported minimized.
        match associativity_counterexample(variety) {
            Some((x, i, y, j, z)) => {
                let (lhs, rhs) = assoc_sides(variety, &x, i, &y, j, &z);
                out.push(format!(
                    "counterexample total_arity={} x={} i={i} y={} j={j} z={}",
                    x.n() + y.n() + z.n(),
                    brief(&x),
                    brief(&y),
                    brief(&z)
                ));
                out.push(format!("lhs={}", brief(&lhs)));
                out.push(format!("rhs={}", brief(&rhs)));
                let valid = lhs.validate().is_empty() && rhs.validate().is_empty();
                out.push(format!(
                    "sides_valid={} expected=counterexample",
                    if valid { "yes" } else { "no" }
                ));
                out.ok = valid && lhs != rhs;
            }
            None => {
                out.push("counterexample=none expected=counterexample".into());
                out.ok = false;
            }
        }
    } else {
        for v in report.violations.iter().take(3) {
            out.push(format!("violation sample={} case={:?}", v.sample, v.case));
        }
        out.ok = report.ok();
    }
    out
}

pub fn check_equiv(variety: Variety, samples: usize, seed: u64) -> Outcome {
    let mut s = Sampler::new(seed);
    let mut pairs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (x, n) = sample_cacti(&mut s, variety, 5);
        let (y, m) = sample_cacti(&mut s, variety, 5);
        let sigma = s.perm(n);
        let sigma2 = s.perm(m);
        let i = s.slot(n);
        pairs.push((sigma, x, i, sigma2, y));
    }
    let report = check_equivariance(&CactusOperad(variety), &pairs);
    let mut out = Outcome::new();
    out.push(summary("equiv", variety, report.checked, report.violations.len()));
    for v in report.violations.iter().take(3) {
        out.push(format!("violation sample={}", v.sample));
    }
    out.ok = report.ok();
    out
}

pub fn check_unit(variety: Variety, samples: usize, seed: u64) -> Outcome {
    let mut s = Sampler::new(seed);
    let mut out = Outcome::new();
    if variety.normalized() {
        let xs: Vec<Cactus> = (0..samples).map(|_| sample_cacti(&mut s, variety, 5).0).collect();
        let report = check_units(&CactusOperad(variety), &xs);
        out.push(format!(
            "{} unit=two-sided",
            summary("unit", variety, report.checked, report.violations.len())
        ));
        out.ok = report.ok();
    } else {
        // Free radii admit right units of every radius but no left unit:
        // gluing rescales the guest, so a host single lobe shrinks or grows
        // whatever is inserted into it.
        let spine = if variety.spined() { Some(Q::zero()) } else { None };
        let mut right_violations = 0usize;
        let mut left_witness = None;
        for _ in 0..samples {
            let (x, n) = sample_cacti(&mut s, variety, 5);
            let i = s.slot(n);
            let e = Cactus::single(variety, s.radius(), spine.clone()).expect("positive radius");
            if compose(&x, i, &e).expect("gluing a single lobe") != x {
                right_violations += 1;
            }
            if left_witness.is_none() {
                let u = Cactus::single(variety, Q::one(), spine.clone()).expect("unit radius");
                if compose(&u, 1, &x).expect("gluing into a single lobe") != x {
                    left_witness = Some(brief(&x));
                }
            }
        }
        out.push(format!(
            "{} unit=right-only left_unit_witness={}",
            summary("unit", variety, samples, right_violations),
            if left_witness.is_some() { "found" } else { "missing" }
        ));
        out.ok = right_violations == 0 && left_witness.is_some();
    }
    out
}

/// The free varieties split as normalized cacti paired with radius tuples:
/// radii glue by rescaled splicing and the normalized parts glue through the
/// radius-perturbed gluing.
pub fn check_semidirect(variety: Variety, samples: usize, seed: u64) -> Result<Outcome, String> {
    if variety.normalized() {
        return Err(format!(
            "the semidirect split applies to cact and cacti, not {}",
            variety.name()
        ));
    }
    let product = ProductOperad::right_semidirect(
        ScalingOperad,
        CactusOperad(variety.normalized_counterpart()),
        Box::new(|c1: &Cactus, i: usize, radii: &Vec<Q>, c2: &Cactus| {
            perturbed_compose(c1, i, radii, c2).expect("split pairs glue")
        }),
    );
    let mut s = Sampler::new(seed);
    let mut out = Outcome::new();
    let mut violations = 0usize;
    for idx in 0..samples {
        let (a, n) = sample_cacti(&mut s, variety, 5);
        let (b, _) = sample_cacti(&mut s, variety, 5);
        let i = s.slot(n);
        let glued = compose(&a, i, &b).expect("free gluing");
        let got = product.compose(&a.normalize(), i, &b.normalize());
        if got != glued.normalize() {
            violations += 1;
            if violations <= 3 {
                out.push(format!("violation sample={idx} a={} i={i} b={}", brief(&a), brief(&b)));
            }
        }
    }
    out.lines.insert(0, summary("semidirect", variety, samples, violations));
    out.ok = violations == 0;
    Ok(out)
}

/// The spined varieties split as spineless cacti paired with angle tuples:
/// the spineless parts glue after rotating the guest by the host's angle and
/// the angles glue additively after the same rotation's per-lobe sweep.
pub fn check_bicrossed(variety: Variety, samples: usize, seed: u64) -> Result<Outcome, String> {
    let spineless = match variety {
        Variety::Cacti => Variety::Cact,
        Variety::Cacti1 => Variety::Cact1,
        _ => {
            return Err(format!(
                "the bicrossed split applies to cacti and cacti1, not {}",
                variety.name()
            ))
        }
    };
    let product = ProductOperad::bicrossed(
        CactusOperad(spineless),
        AngleOperad,
        Box::new(|c: &Cactus, i: usize, d: &Vec<Angle>, c2: &Cactus| {
            twisted_compose(c, i, &d[i - 1], c2).expect("split pairs glue")
        }),
        Box::new(|d: &Vec<Angle>, i: usize, c2: &Cactus, d2: &Vec<Angle>| {
            angles_compose(d, i, c2, d2)
        }),
    );
    let split = |c: &Cactus| (c.forget_spines(), spine_angles(c));
    let mut s = Sampler::new(seed);
    let mut out = Outcome::new();
    let mut violations = 0usize;
    for idx in 0..samples {
        let (a, n) = sample_cacti(&mut s, variety, 5);
        let (b, _) = sample_cacti(&mut s, variety, 5);
        let i = s.slot(n);
        let glued = compose(&a, i, &b).expect("spined gluing");
        let got = product.compose(&split(&a), i, &split(&b));
        if got != split(&glued) {
            violations += 1;
            if violations <= 3 {
                out.push(format!("violation sample={idx} a={} i={i} b={}", brief(&a), brief(&b)));
            }
        }
    }
    out.lines.insert(0, summary("bicrossed", variety, samples, violations));
    out.ok = violations == 0;
    Ok(out)
}

// ---------------------------------------------------------------------------
// The acceptance criteria behind `selftest`
// ---------------------------------------------------------------------------

pub fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    for variety in [Variety::Cact, Variety::Cacti] {
        for axiom in [check_assoc, check_equiv] {
            let start = Instant::now();
            out.merge(axiom(variety, 1000, 42));
            if start.elapsed().as_secs() >= 60 {
                out.push(format!("too_slow variety={}", variety.name()));
                out.ok = false;
            }
        }
    }
    out
}

/// Where the stored counterexample fixtures live.
pub fn fixture_path(variety: Variety) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("assoc_counterexample_{}.txt", variety.name()))
}

pub fn counterexample_text(variety: Variety) -> Option<String> {
    let (x, i, y, j, z) = associativity_counterexample(variety)?;
    let (lhs, rhs) = assoc_sides(variety, &x, i, &y, j, &z);
    let mut text = String::new();
    let _ = writeln!(text, "variety={}", variety.name());
    let _ = writeln!(text, "x={}", brief(&x));
    let _ = writeln!(text, "i={i}");
    let _ = writeln!(text, "y={}", brief(&y));
    let _ = writeln!(text, "j={j}");
    let _ = writeln!(text, "z={}", brief(&z));
    let _ = writeln!(text, "lhs={}", brief(&lhs));
    let _ = writeln!(text, "rhs={}", brief(&rhs));
    Some(text)
}

pub fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    for variety in [Variety::Cact1, Variety::Cacti1] {
        match associativity_counterexample(variety) {
            Some((x, i, y, j, z)) => {
                let (lhs, rhs) = assoc_sides(variety, &x, i, &y, j, &z);
                let valid = lhs.validate().is_empty()
                    && rhs.validate().is_empty()
                    && x.validate().is_empty()
                    && y.validate().is_empty()
                    && z.validate().is_empty();
                out.push(format!(
                    "variety={} counterexample=found total_arity={} sides_valid={} distinct={}",
                    variety.name(),
                    x.n() + y.n() + z.n(),
                    if valid { "yes" } else { "no" },
                    if lhs != rhs { "yes" } else { "no" }
                ));
                out.ok &= valid && lhs != rhs;
                let path = fixture_path(variety);
                let fresh = counterexample_text(variety).expect("found above");
                if std::env::var_os("UPDATE_GOLDEN").is_some() {
                    std::fs::create_dir_all(path.parent().expect("fixture dir"))
                        .expect("fixture dir is writable");
                    std::fs::write(&path, &fresh).expect("fixture is writable");
                }
                match std::fs::read_to_string(&path) {
                    Ok(stored) => {
                        out.push(format!(
                            "variety={} fixture={}",
                            variety.name(),
                            if stored == fresh { "matches" } else { "stale" }
                        ));
                        out.ok &= stored == fresh;
                    }
                    Err(_) => {
                        out.push(format!(
                            "variety={} fixture=missing (rerun with UPDATE_GOLDEN=1)",
                            variety.name()
                        ));
                        out.ok = false;
                    }
                }
            }
            None => {
                out.push(format!("variety={} counterexample=none", variety.name()));
                out.ok = false;
            }
        }
    }
    out
}

pub fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    for variety in [Variety::Cact, Variety::Cacti] {
        out.merge(check_semidirect(variety, 500, 42).expect("free varieties"));
    }
    out
}

pub fn criterion_4() -> Outcome {
    let mut out = check_bicrossed(Variety::Cacti, 500, 42).expect("spined variety");
    // The split must also invert: restoring spines from the angle tuple
    // recovers the glued cactus on the nose.
    let mut s = Sampler::new(0x5EC4);
    let mut rebuilt_bad = 0usize;
    for _ in 0..100 {
        let (a, n) = sample_cacti(&mut s, Variety::Cacti, 5);
        let (b, _) = sample_cacti(&mut s, Variety::Cacti, 5);
        let i = s.slot(n);
        let glued = compose(&a, i, &b).expect("spined gluing");
        let back = with_spine_angles(&glued.forget_spines(), &spine_angles(&glued), Variety::Cacti)
            .expect("angles fit");
        if back != glued {
            rebuilt_bad += 1;
        }
    }
    out.push(format!("split_inverts violations={rebuilt_bad}"));
    out.ok &= rebuilt_bad == 0;
    out
}

pub fn criterion_5() -> Outcome {
    let start = Instant::now();
    let expected: [&[usize]; 4] = [&[1], &[1, 1], &[1, 3, 2], &[1, 6, 11, 6]];
    let mut out = Outcome::new();
    for n in 1..=4 {
        let complex = build_complex(n);
        complex.assert_boundary_squares_to_zero();
        let h = complex.homology();
        let torsion_free = h.torsion.iter().all(Vec::is_empty);
        out.push(format!(
            "n={n} betti={} torsion={} chi={}",
            h.betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(","),
            if torsion_free { "none" } else { "present" },
            complex.euler_char()
        ));
        out.ok &= h.betti == expected[n - 1] && torsion_free;
        if n >= 2 {
            out.ok &= complex.euler_char() == 0;
        }
    }
    out.ok &= start.elapsed().as_secs() < 300;
    out
}

pub fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let mut s = Sampler::new(0xCCD6);
    let mut bad = 0usize;
    for variety in VARIETIES {
        for _ in 0..50 {
            let (c, n) = sample_cacti(&mut s, variety, 6);
            let ccd = complete(&chord_diagram(&c)).expect("unreduced diagram");
            let h = ccd_homology(&ccd);
            let mut betti = h.betti.clone();
            while betti.last() == Some(&0) {
                betti.pop();
            }
            if betti != vec![1, n] || h.torsion.iter().any(|t| !t.is_empty()) {
                bad += 1;
            }
        }
    }
    out.push(format!("bouquet_homology samples=200 violations={bad}"));
    out.ok &= bad == 0;

    let mut mismatches = 0usize;
    let mut types = 0usize;
    for n in 1..=3 {
        for tau in enumerate_toptypes(n) {
            types += 1;
            let c = tau.standard_cactus(Variety::Cact);
            let ccd = complete(&chord_diagram(&c)).expect("unreduced diagram");
            let counts: Vec<usize> = ccd.cells.iter().map(Vec::len).collect();
            let fibers = fiber_types(&tau);
            let base = tau.dim();
            for (k, have) in fibers.iter().enumerate() {
                let want =
                    if k >= base && k - base < counts.len() { counts[k - base] } else { 0 };
                if have.len() != want {
                    mismatches += 1;
                }
            }
        }
    }
    out.push(format!("fiber_cell_counts types={types} mismatches={mismatches}"));
    out.ok &= mismatches == 0;
    out
}

pub fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let mut s = Sampler::new(0x5EC7);
    let mut section_bad = 0usize;
    for variety in VARIETIES {
        for _ in 0..125 {
            let (c, _) = sample_cacti(&mut s, variety, 5);
            let up = section_attach(&c);
            if contract_lobe(&up, c.n() + 1).expect("fresh lobe contracts") != c {
                section_bad += 1;
            }
        }
    }
    out.push(format!("section_retracts samples=500 violations={section_bad}"));
    out.ok &= section_bad == 0;

    let mut collapse_bad = 0usize;
    let mut collapsed = 0usize;
    let mut s = Sampler::new(0xC011);
    for variety in [Variety::Cact1, Variety::Cact] {
        while collapsed < if variety == Variety::Cact1 { 100 } else { 200 } {
            let (c, _) = sample_cacti(&mut s, variety, 5);
            let dims = c.toptype().lobe_dims();
            let candidates: Vec<(usize, usize)> = c
                .labels()
                .into_iter()
                .filter_map(|l| (dims[l - 1] >= 1).then_some((l, dims[l - 1])))
                .collect();
            if candidates.is_empty() {
                continue;
            }
            let (label, q) = candidates[s.slot(candidates.len()) - 1];
            let vertex = s.slot(q + 1) - 1;
            let mut word = c.word();
            let mut zeroed = Q::zero();
            let mut seen = 0usize;
            for entry in &mut word {
                if entry.0 == label {
                    if seen == vertex {
                        zeroed = std::mem::replace(&mut entry.1, Q::zero());
                    }
                    seen += 1;
                }
            }
            if variety.normalized() {
                // Keep the lobe's radius: a face point of the simplex moves
                // the collapsed length onto a neighbouring arc.
                let aug = if vertex == 0 { 1 } else { vertex - 1 };
                let mut seen = 0usize;
                for entry in &mut word {
                    if entry.0 == label {
                        if seen == aug {
                            entry.1 = entry.1.clone() + zeroed.clone();
                        }
                        seen += 1;
                    }
                }
            }
            let cword = canonicalize_word(&word).expect("one arc zeroed");
            let collapsed_c = Cactus::from_word(variety, &cword, &BTreeMap::new())
                .expect("canonical word");
            let predicted = degenerate(&c.toptype(), label, vertex).expect("arc exists");
            if collapsed_c.toptype() != predicted {
                collapse_bad += 1;
            }
            collapsed += 1;
        }
    }
    out.push(format!("arc_collapse samples=200 violations={collapse_bad}"));
    out.ok &= collapse_bad == 0;
    out
}

fn round_trips(c: &Cactus) -> Vec<&'static str> {
    let mut failures = Vec::new();
    match to_ribbon(c) {
        Ok(g) => {
            if from_ribbon(&g, c.variety).ok().as_ref() != Some(c) {
                failures.push("ribbon");
            }
        }
        Err(_) => failures.push("ribbon"),
    }
    if from_dual_tree(&dual_tree(c)).ok().as_ref() != Some(c) {
        failures.push("dualtree");
    }
    if from_chord_diagram(&chord_diagram(c)).ok().as_ref() != Some(c) {
        failures.push("chord");
    }
    if arc_to_cactus(&arc_embedding(c)).ok().as_ref() != Some(c) {
        failures.push("arcs");
    }
    if crate::doc::parse(&crate::doc::print(c)).ok().as_ref() != Some(c) {
        failures.push("document");
    }
    failures
}

pub fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let mut exhaustive = 0usize;
    let mut bad = 0usize;
    for variety in VARIETIES {
        for n in 1..=3 {
            for tau in enumerate_toptypes(n) {
                exhaustive += 1;
                bad += round_trips(&tau.standard_cactus(variety)).len();
            }
        }
    }
    out.push(format!("round_trips_exhaustive cacti={exhaustive} failures={bad}"));
    out.ok &= bad == 0;

    let mut s = Sampler::new(0x2078);
    let mut sampled_bad = 0usize;
    for variety in VARIETIES {
        for _ in 0..40 {
            let (c, _) = sample_cacti(&mut s, variety, 5);
            sampled_bad += round_trips(&c).len();
        }
    }
    out.push(format!("round_trips_sampled cacti=160 failures={sampled_bad}"));
    out.ok &= sampled_bad == 0;
    out
}

pub fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let mut s = Sampler::new(0x5CC9);
    let mut closure_bad = 0usize;
    let mut word_bad = 0usize;
    for _ in 0..200 {
        let n = s.slot(5);
        let m = s.slot(5);
        let radii_a: Vec<Q> = (0..n).map(|_| s.radius()).collect();
        let radii_b: Vec<Q> = (0..m).map(|_| s.radius()).collect();
        let a = {
            let plain = Cactus::corolla(Variety::Cact, &radii_a).expect("positive radii");
            CactusOperad(Variety::Cact).act(&s.perm(n), &plain)
        };
        let b = {
            let plain = Cactus::corolla(Variety::Cact, &radii_b).expect("positive radii");
            CactusOperad(Variety::Cact).act(&s.perm(m), &plain)
        };
        let i = s.slot(n);
        let glued = compose(&a, i, &b).expect("corollas glue");
        if !is_scc(&glued) {
            closure_bad += 1;
            continue;
        }
        let wa = scc_component_word(&a).expect("corolla");
        let wb = scc_component_word(&b).expect("corolla");
        let wg = scc_component_word(&glued).expect("corolla");
        let pos = wa.inverse().apply(i);
        let predicted = block_permutation(&wa, pos, &wb).expect("slot in range");
        if wg != predicted {
            word_bad += 1;
        }
    }
    out.push(format!(
        "scc_closure samples=200 closure_violations={closure_bad} word_violations={word_bad}"
    ));
    out.ok &= closure_bad == 0 && word_bad == 0;

    for variety in VARIETIES {
        out.merge(check_unit(variety, 100, 0x0917));
    }
    out
}

pub fn criterion_10() -> Outcome {
    let mut out = Outcome::new();
    let g = gerstenhaber_cells();
    let coeff = |t: &TopType| -> i64 {
        g.boundary.iter().find(|(_, c)| c == t).map(|(e, _)| *e).unwrap_or(0)
    };
    let d21 = coeff(&g.dot21);
    let d12 = coeff(&g.dot12);
    out.push(format!("boundary_of_star dot21={d21} dot12={d12}"));
    out.ok &= d21 == -d12 && d21.abs() == 1 && g.boundary.len() == 2;

    // The other 1-cell of K(2) carries the opposite boundary, so a signed sum
    // of the two is a cycle and spans H_1.
    let complex = build_complex(2);
    let star2 = TopType::from_label_word(&[2, 1, 2]).expect("valid word");
    let j1 = complex.cells[1].iter().position(|t| *t == g.star).expect("cell present");
    let j2 = complex.cells[1].iter().position(|t| *t == star2).expect("cell present");
    let col = |j: usize| -> Vec<i64> {
        complex.boundaries[1]
            .iter()
            .map(|row| i64::try_from(&row[j]).expect("small entry"))
            .collect()
    };
    let (c1, c2) = (col(j1), col(j2));
    let opposite = c1.iter().zip(&c2).all(|(a, b)| *a == -*b);
    let equal = c1 == c2;
    let closes = opposite || equal;
    out.push(format!(
        "circle cells=2 combination={}",
        if opposite {
            "sum"
        } else if equal {
            "difference"
        } else {
            "none"
        }
    ));
    let h = homology(2);
    out.push(format!(
        "betti={}",
        h.betti.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",")
    ));
    out.ok &= closes && h.betti == vec![1, 1] && h.torsion.iter().all(Vec::is_empty);
    out
}

pub fn criteria() -> Vec<(usize, fn() -> Outcome)> {
    vec![
        (1, criterion_1 as fn() -> Outcome),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ]
}
