//! `cacti`: enumerate combinatorial types, glue cacti, check the operad
//! axioms and splittings, compute homology, convert between views and render
//! pictures. Exit code 0 means the expected outcome held, 1 means a checked
//! property failed, 2 means the tool could not run the request.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cacti_cli::checks::{
    self, check_assoc, check_bicrossed, check_equiv, check_semidirect, check_unit, Outcome,
};
use cacti_cli::doc;
use cacti_cli::views;
use cacti_core::cactus::{Cactus, TopType, Variety};
use cacti_core::cells::{build_complex, fiber_types, toptypes_by_dim};
use cacti_core::compose::compose;
use cacti_core::diagrams::{
    arc_embedding, bw_tree, ccd_homology, chord_diagram, complete, dual_tree,
};
use cacti_core::graph::to_ribbon;
use cacti_core::rational::qi;
use cacti_core::render::{
    render_cactus, render_chord_diagram, render_dual_tree, render_toptype, RenderFormat,
};

#[derive(Parser)]
#[command(name = "cacti", version, about = "Exact workbench for the combinatorics of cacti")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Axiom {
    Assoc,
    Equiv,
    Semidirect,
    Bicrossed,
    Unit,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Target {
    /// The cell complex of normalized spineless cacti.
    Cact1,
    /// The completed chord diagram of the standard corolla.
    Ccd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum View {
    Ribbon,
    Dualtree,
    Chord,
    Arcs,
    Bwtree,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Picture {
    Cactus,
    Toptype,
    Dualtree,
    Chord,
}

#[derive(Subcommand)]
enum Command {
    /// List the combinatorial types on a given number of lobes
    Enumerate {
        /// Number of lobes (1 through 6)
        #[arg(long)]
        n: usize,
        /// Restrict to one cell dimension
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Glue the cactus in document B into slot I of document A
    Compose {
        /// Variety both documents must carry
        #[arg(long)]
        variety: String,
        /// Slot of A receiving B
        #[arg(long)]
        i: usize,
        a: PathBuf,
        b: PathBuf,
    },
    /// Run a seeded axiom checker and report violations
    Verify {
        #[arg(long)]
        axiom: Axiom,
        #[arg(long)]
        variety: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Integral homology, as Betti numbers and torsion
    Homology {
        #[arg(long)]
        target: Target,
        /// Number of lobes
        #[arg(long)]
        n: usize,
    },
    /// Compare fiber-type counts of a combinatorial type against
    /// completed-chord-diagram cells
    Fiber {
        /// File holding a type key such as 1.2.1
        #[arg(long = "type", value_name = "FILE")]
        type_file: PathBuf,
    },
    /// Re-express a cactus document in another view
    Convert {
        #[arg(long)]
        to: View,
        file: PathBuf,
    },
    /// Draw a cactus document
    Render {
        /// dot, tikz or svg
        #[arg(long)]
        format: String,
        #[arg(long, default_value = "cactus")]
        view: Picture,
        file: PathBuf,
    },
    /// Run the full acceptance suite
    Selftest,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn read_cactus(path: &PathBuf) -> Result<Cactus, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    doc::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn variety_of(name: &str) -> Result<Variety, String> {
    Variety::from_name(name)
        .ok_or_else(|| format!("unknown variety `{name}`; expected cact1, cact, cacti1 or cacti"))
}

fn print_outcome(out: &Outcome) -> ExitCode {
    for line in &out.lines {
        println!("{line}");
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn betti_line(betti: &[usize]) -> String {
    let mut betti = betti.to_vec();
    while betti.len() > 1 && betti.last() == Some(&0) {
        betti.pop();
    }
    let parts: Vec<String> = betti.iter().map(|b| b.to_string()).collect();
    format!("Betti: {}", parts.join(" "))
}

fn torsion_lines<T: std::fmt::Display>(torsion: &[Vec<T>]) -> Vec<String> {
    let mut lines = Vec::new();
    for (dim, entries) in torsion.iter().enumerate() {
        if !entries.is_empty() {
            let parts: Vec<String> = entries.iter().map(|e| e.to_string()).collect();
            lines.push(format!("Torsion: dim={dim} {}", parts.join(",")));
        }
    }
    if lines.is_empty() {
        lines.push("Torsion: none".into());
    }
    lines
}

fn run_enumerate(n: usize, dim: Option<usize>) -> ExitCode {
    if n == 0 || n > 6 {
        return fail("--n must be between 1 and 6");
    }
    let by_dim = toptypes_by_dim(n);
    if let Some(d) = dim {
        if d >= by_dim.len() {
            return fail(format!("types with {n} lobes have dimensions 0 through {}", n - 1));
        }
    }
    let chosen: Vec<usize> = match dim {
        Some(d) => vec![d],
        None => (0..by_dim.len()).collect(),
    };
    for &d in &chosen {
        println!("dim={d} count={}", by_dim[d].len());
    }
    if dim.is_none() {
        let total: usize = by_dim.iter().map(Vec::len).sum();
        println!("total={total}");
    }
    for &d in &chosen {
        let mut words: Vec<Vec<usize>> = by_dim[d].iter().map(TopType::label_word).collect();
        words.sort();
        for w in words {
            let parts: Vec<String> = w.iter().map(|l| l.to_string()).collect();
            println!("type dim={d} key={}", parts.join("."));
        }
    }
    ExitCode::SUCCESS
}

fn run_compose(variety: &str, i: usize, a: &PathBuf, b: &PathBuf) -> ExitCode {
    let variety = match variety_of(variety) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let (a, b) = match (read_cactus(a), read_cactus(b)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return fail(e),
    };
    for (name, c) in [("A", &a), ("B", &b)] {
        if c.variety != variety {
            return fail(format!("document {name} is {}, not {}", c.variety.name(), variety.name()));
        }
    }
    match compose(&a, i, &b) {
        Ok(c) => {
            print!("{}", doc::print(&c));
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn run_verify(axiom: Axiom, variety: &str, samples: usize, seed: u64) -> ExitCode {
    let variety = match variety_of(variety) {
        Ok(v) => v,
        Err(e) => return fail(e),
    };
    let outcome = match axiom {
        Axiom::Assoc => Ok(check_assoc(variety, samples, seed)),
        Axiom::Equiv => Ok(check_equiv(variety, samples, seed)),
        Axiom::Unit => Ok(check_unit(variety, samples, seed)),
        Axiom::Semidirect => check_semidirect(variety, samples, seed),
        Axiom::Bicrossed => check_bicrossed(variety, samples, seed),
    };
    match outcome {
        Ok(out) => print_outcome(&out),
        Err(e) => fail(e),
    }
}

fn run_homology(target: Target, n: usize) -> ExitCode {
    let h = match target {
        Target::Cact1 => {
            if n == 0 || n > 5 {
                return fail("--target cact1 supports --n between 1 and 5");
            }
            build_complex(n).homology()
        }
        Target::Ccd => {
            if n == 0 || n > 8 {
                return fail("--target ccd supports --n between 1 and 8");
            }
            let c = Cactus::corolla(Variety::Cact, &vec![qi(1); n]).expect("unit radii");
            let ccd = complete(&chord_diagram(&c)).expect("fresh diagrams are not reduced");
            ccd_homology(&ccd)
        }
    };
    println!("{}", betti_line(&h.betti));
    for line in torsion_lines(&h.torsion) {
        println!("{line}");
    }
    ExitCode::SUCCESS
}

fn run_fiber(type_file: &PathBuf) -> ExitCode {
    let text = match std::fs::read_to_string(type_file) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", type_file.display())),
    };
    let key = text.trim();
    let word: Result<Vec<usize>, _> = key.split('.').map(str::parse::<usize>).collect();
    let tau = match word.ok().and_then(|w| TopType::from_label_word(&w).ok()) {
        Some(t) => t,
        None => return fail(format!("cannot read `{key}` as a type key such as 1.2.1")),
    };
    println!("type={} n={} dim={}", tau.key(), tau.n(), tau.dim());
    let c = tau.standard_cactus(Variety::Cact);
    let ccd = complete(&chord_diagram(&c)).expect("fresh diagrams are not reduced");
    let counts: Vec<usize> = ccd.cells.iter().map(Vec::len).collect();
    let fibers = fiber_types(&tau);
    let base = tau.dim();
    let top = fibers.len().max(base + counts.len());
    let mut all_match = true;
    for k in 0..top {
        let have = fibers.get(k).map_or(0, Vec::len);
        let want = if k >= base && k - base < counts.len() { counts[k - base] } else { 0 };
        if have == 0 && want == 0 {
            continue;
        }
        println!("dim={k} fibers={have} cells={want}");
        all_match &= have == want;
    }
    println!("match={}", if all_match { "yes" } else { "no" });
    if all_match {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run_convert(to: View, file: &PathBuf) -> ExitCode {
    let c = match read_cactus(file) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let lines = match to {
        View::Ribbon => match to_ribbon(&c) {
            Ok(g) => views::ribbon_lines(&g),
            Err(e) => return fail(e),
        },
        View::Dualtree => views::dual_tree_lines(&dual_tree(&c)),
        View::Chord => views::chord_lines(&chord_diagram(&c)),
        View::Arcs => views::arcs_lines(&arc_embedding(&c)),
        View::Bwtree => views::bw_lines(&bw_tree(&c)),
    };
    for line in lines {
        println!("{line}");
    }
    ExitCode::SUCCESS
}

fn run_render(format: &str, view: Picture, file: &PathBuf) -> ExitCode {
    let Some(format) = RenderFormat::from_name(format) else {
        return fail("unknown render format; expected dot, tikz or svg");
    };
    let c = match read_cactus(file) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    let text = match view {
        Picture::Cactus => render_cactus(&c, format),
        Picture::Toptype => render_toptype(&c.toptype(), format),
        Picture::Dualtree => render_dual_tree(&dual_tree(&c), format),
        Picture::Chord => render_chord_diagram(&chord_diagram(&c), format),
    };
    print!("{text}");
    if !text.ends_with('\n') {
        println!();
    }
    ExitCode::SUCCESS
}

fn run_selftest() -> ExitCode {
    let mut all_ok = true;
    for (k, run) in checks::criteria() {
        let out = run();
        println!("criterion {k}: {}", if out.ok { "pass" } else { "fail" });
        if !out.ok {
            for line in &out.lines {
                println!("  {line}");
            }
        }
        all_ok &= out.ok;
    }
    println!("selftest: {}", if all_ok { "pass" } else { "fail" });
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Enumerate { n, dim } => run_enumerate(n, dim),
        Command::Compose { variety, i, a, b } => run_compose(&variety, i, &a, &b),
        Command::Verify { axiom, variety, samples, seed } => {
            run_verify(axiom, &variety, samples, seed)
        }
        Command::Homology { target, n } => run_homology(target, n),
        Command::Fiber { type_file } => run_fiber(&type_file),
        Command::Convert { to, file } => run_convert(to, &file),
        Command::Render { format, view, file } => run_render(&format, view, &file),
        Command::Selftest => run_selftest(),
    }
}
