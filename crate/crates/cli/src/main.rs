//! `solenoid`: verification runs over map, diagram and presentation files.
//!
//! Exit codes: 0 pass, 1 fail, 2 unreadable or malformed input, 3 a
//! resource cap was hit before an answer was reached.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use solenoid_core::dynamics::{backward_tree, entropy, itinerary, GraphPoint, Metric, SimError};
use solenoid_core::export::{cylinder_csv, itinerary_csv, manifold_dot, orbit_tree_dot, transition_dot, tree_sizes_csv};
use solenoid_core::group::{h1, todd_coxeter_table, GroupError, Presentation, DEFAULT_MAX_COSETS};
use solenoid_core::heegaard::{
    induced_spine_map, is_alternating_splitting, parse_diagram_file, pi1_presentation, HeegaardError, Side,
};
use solenoid_core::mapfile::{emit_map_file, parse_map_file};
use solenoid_core::text::{content_lines, keyword};
use solenoid_core::williams::{check_williams_with_cap, DEFAULT_ORBIT_CAP};
use solenoid_core::{EdgeId, GraphMap};

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => { writeln!($out, $($arg)*).expect("string write") };
}

macro_rules! outp {
    ($out:expr, $($arg:tt)*) => { write!($out, $($arg)*).expect("string write") };
}

const PASS: u8 = 0;
const FAIL: u8 = 1;
const INPUT: u8 = 2;
const CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "solenoid", version, about = "Branched 1-manifold maps, Heegaard diagrams and group certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the four Williams axioms for a map file.
    CheckMap {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
        /// Steps allowed for a vertex orbit to close up.
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        orbit_cap: usize,
    },
    /// Check that every curve of a diagram file alternates.
    CheckDiagram { file: PathBuf },
    /// Build the spine map of a diagram file and write it as a map file.
    Induce {
        file: PathBuf,
        #[arg(long, default_value = "N1")]
        side: Side,
        /// Output path; standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fundamental group of a diagram or presentation file.
    Pi1 {
        file: PathBuf,
        /// Enumerate cosets to find the group order.
        #[arg(long)]
        order: bool,
        /// Report the abelianization.
        #[arg(long)]
        h1: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_COSETS)]
        max_cosets: usize,
        /// Spine side used for diagram files.
        #[arg(long, default_value = "N1")]
        side: Side,
    },
    /// Itineraries, backward-orbit trees, cylinder counts and entropy.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        /// Seed point such as `K1@1/2`; repeatable.
        #[arg(long = "seed")]
        seeds: Vec<String>,
        /// Additional random interior seeds.
        #[arg(long, default_value_t = 0)]
        random: usize,
        /// RNG seed for `--random`.
        #[arg(long, default_value_t = 0)]
        rng_seed: u64,
        /// Largest backward-orbit tree to build.
        #[arg(long, default_value_t = 1_000_000)]
        max_nodes: u64,
        #[arg(long, value_enum, default_value_t = SimFormat::Csv)]
        format: SimFormat,
    },
    /// Graphviz rendering of a map file.
    ExportDot {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DotGraph::Transitions)]
        graph: DotGraph,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReportFormat {
    Text,
    Kv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimFormat {
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DotGraph {
    Manifold,
    Transitions,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { INPUT } else { PASS };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = String::new();
    let code = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(cli, &mut out))).unwrap_or_else(|_| {
        eprintln!("internal error");
        FAIL
    });
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(INPUT);
    }
    ExitCode::from(code)
}

fn run(cli: Cli, out: &mut String) -> u8 {
    let result = match cli.command {
        Command::CheckMap { file, format, orbit_cap } => check_map(&file, format, orbit_cap, out),
        Command::CheckDiagram { file } => check_diagram(&file, out),
        Command::Induce { file, side, output } => induce(&file, side, output.as_deref(), out),
        Command::Pi1 { file, order, h1, max_cosets, side } => pi1(&file, order, h1, max_cosets, side, out),
        Command::Simulate { file, depth, seeds, random, rng_seed, max_nodes, format } => {
            simulate(&file, depth, &seeds, random, rng_seed, max_nodes, format, out)
        }
        Command::ExportDot { file, graph } => export_dot(&file, graph, out),
    };
    match result {
        Ok(code) => code,
        Err((code, message)) => {
            eprintln!("{message}");
            code
        }
    }
}

type Outcome = Result<u8, (u8, String)>;

fn read(path: &Path) -> Result<String, (u8, String)> {
    fs::read_to_string(path).map_err(|e| (INPUT, format!("{}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<GraphMap, (u8, String)> {
    parse_map_file(&read(path)?).map_err(|e| (INPUT, format!("{}: {e}", path.display())))
}

fn check_map(path: &Path, format: ReportFormat, orbit_cap: usize, out: &mut String) -> Outcome {
    let g = load_map(path)?;
    let report = check_williams_with_cap(&g, orbit_cap).map_err(|e| (CAP, e.to_string()))?;
    let x = g.transition_matrix();
    match format {
        ReportFormat::Text => {
            outln!(out, "Transition matrix:");
            for row in x.rows() {
                outln!(out, "  {}", row.iter().map(u64::to_string).collect::<Vec<_>>().join(" "));
            }
            outln!(out, "{report}");
        }
        ReportFormat::Kv => {
            for (i, row) in x.rows().iter().enumerate() {
                outln!(out, "matrix.row{}={}", i + 1, row.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            }
            outp!(out, "{}", report.to_key_value());
        }
    }
    Ok(if report.passed() { PASS } else { FAIL })
}

fn check_diagram(path: &Path, out: &mut String) -> Outcome {
    let file = parse_diagram_file(&read(path)?).map_err(|e| (INPUT, format!("{}: {e}", path.display())))?;
    let h = &file.diagram;
    match is_alternating_splitting(h) {
        Err(e) => Err((FAIL, e.to_string())),
        Ok(true) => {
            outln!(out, "alternating (type {})", h.kind());
            Ok(PASS)
        }
        Ok(false) => {
            let (curve, position) = h.first_violation().expect("a violation exists");
            outln!(out, "not alternating (type {}): curve {curve} breaks the pattern at position {position}", h.kind());
            Ok(FAIL)
        }
    }
}

fn heegaard_code(e: &HeegaardError) -> u8 {
    match e {
        HeegaardError::MissingGates | HeegaardError::BadSpine(_) | HeegaardError::UnknownEdge(_) => INPUT,
        _ => FAIL,
    }
}

fn induce(path: &Path, side: Side, output: Option<&Path>, out: &mut String) -> Outcome {
    let file = parse_diagram_file(&read(path)?).map_err(|e| (INPUT, format!("{}: {e}", path.display())))?;
    let g = induced_spine_map(&file.diagram, side, &file.recipe).map_err(|e| (heegaard_code(&e), e.to_string()))?;
    let text = emit_map_file(&g);
    match output {
        Some(out) => fs::write(out, text).map_err(|e| (INPUT, format!("{}: {e}", out.display())))?,
        None => outp!(out, "{text}"),
    }
    Ok(PASS)
}

fn is_diagram(text: &str) -> bool {
    content_lines(text).next().is_some_and(|(_, line)| matches!(keyword(line).0, "type" | "curve"))
}

fn pi1(path: &Path, order: bool, want_h1: bool, max_cosets: usize, side: Side, out: &mut String) -> Outcome {
    let text = read(path)?;
    let presentation = if is_diagram(&text) {
        let file = parse_diagram_file(&text).map_err(|e| (INPUT, format!("{}: {e}", path.display())))?;
        file.diagram.check_counts().map_err(|e| (FAIL, e.to_string()))?;
        pi1_presentation(&file.diagram, side)
    } else {
        Presentation::parse(&text).map_err(|e| (INPUT, format!("{}: {e}", path.display())))?
    };
    let (order, want_h1) = if order || want_h1 { (order, want_h1) } else { (true, true) };
    outln!(out, "presentation: {}", presentation.to_string().trim_end());
    if want_h1 {
        outln!(out, "H1: {}", h1(&presentation));
    }
    if order {
        match todd_coxeter_table(&presentation, max_cosets) {
            Ok(table) => outln!(out, "order: {} (cosets defined: {}, peak live: {})", table.order(), table.defined, table.max_live),
            Err(GroupError::Overflow { live, defined, cap }) => {
                outln!(out, "order: overflow (live cosets {live}, defined {defined}, cap {cap})");
                return Ok(CAP);
            }
        }
    }
    Ok(PASS)
}

/// Random interior point whose first `steps` images avoid the vertices.
fn random_seed(g: &GraphMap, metric: &Metric, rng: &mut impl Rng, steps: usize) -> Option<GraphPoint> {
    let m = g.domain();
    for _ in 0..1000 {
        let e = EdgeId(rng.gen_range(0..m.edge_count()));
        let d: u64 = rng.gen_range(2..=1000);
        let n: u64 = rng.gen_range(1..d);
        let p = GraphPoint::parse(m, &format!("{}@{n}/{d}", m.edge_name(e))).ok()?;
        if itinerary(g, metric, &p, steps.max(1)).is_ok() {
            return Some(p);
        }
    }
    None
}

/// First point `n/d` on the first edge, `d` running over a fixed list of
/// primes and `n` near `d/2`, whose first `steps` images avoid the vertices.
fn default_seed(g: &GraphMap, metric: &Metric, steps: usize) -> Option<GraphPoint> {
    let name = g.domain().edge_name(EdgeId(0));
    [1009u64, 1013, 1019, 1021, 1031, 1033, 1039, 1049].iter().find_map(|&d| {
        let p = GraphPoint::parse(g.domain(), &format!("{name}@{}/{d}", d / 2)).ok()?;
        itinerary(g, metric, &p, steps.max(1)).is_ok().then_some(p)
    })
}

fn tree_size(g: &GraphMap, seed: &GraphPoint, depth: usize) -> u64 {
    let x = g.transition_matrix();
    let mut level = vec![0u64; x.dim()];
    if let Some(e) = seed.edge() {
        level[e.0] = 1;
    }
    let mut total = 1u64;
    for _ in 0..depth {
        let next: Vec<u64> = (0..x.dim())
            .map(|i| (0..x.dim()).fold(0u64, |acc, j| acc.saturating_add(x.get(i, j).saturating_mul(level[j]))))
            .collect();
        total = total.saturating_add(next.iter().fold(0u64, |a, &b| a.saturating_add(b)));
        level = next;
    }
    total
}

fn simulate(
    path: &Path,
    depth: usize,
    seed_texts: &[String],
    random: usize,
    rng_seed: u64,
    max_nodes: u64,
    format: SimFormat,
    out: &mut String,
) -> Outcome {
    let g = load_map(path)?;
    let m = g.domain();
    let metric = Metric::perron_frobenius(&g).map_err(|e| (FAIL, e.to_string()))?;
    let mut seeds = Vec::new();
    for text in seed_texts {
        let p = GraphPoint::parse(m, text).map_err(|e| (INPUT, e.to_string()))?;
        if p.is_vertex() {
            return Err((FAIL, SimError::VertexPoint(p.display(m)).to_string()));
        }
        seeds.push(p);
    }
    let mut rng = rand::rngs::StdRng::seed_from_u64(rng_seed);
    for _ in 0..random {
        let p = random_seed(&g, &metric, &mut rng, depth)
            .ok_or_else(|| (FAIL, "no random seed avoided the vertices".to_string()))?;
        seeds.push(p);
    }
    if seeds.is_empty() {
        seeds.push(default_seed(&g, &metric, depth).ok_or_else(|| (FAIL, "no default seed avoided the vertices".to_string()))?);
    }
    let mut trees = Vec::new();
    for seed in &seeds {
        if tree_size(&g, seed, depth) > max_nodes {
            return Err((CAP, format!("backward-orbit tree of {} exceeds {max_nodes} nodes", seed.display(m))));
        }
        trees.push(backward_tree(&g, &metric, seed, depth).map_err(|e| (FAIL, e.to_string()))?);
    }
    match format {
        SimFormat::Dot => outp!(out, "{}", orbit_tree_dot(m, &trees[0])),
        SimFormat::Csv => {
            let mut rows = Vec::new();
            for seed in &seeds {
                let path = itinerary(&g, &metric, seed, depth.max(1)).map_err(|e| (FAIL, e.to_string()))?;
                rows.push((seed.clone(), path));
            }
            writeln!(out, "# itineraries\n{}", itinerary_csv(m, &rows)).expect("string write");
            for (seed, levels) in seeds.iter().zip(&trees) {
                writeln!(out, "# backward orbits of {}\n{}", seed.display(m), tree_sizes_csv(levels)).expect("string write");
            }
            writeln!(out, "# cylinders\n{}", cylinder_csv(&g, depth.max(1))).expect("string write");
            writeln!(out, "# entropy\nquantity,value\nlambda,{:.12}\nentropy,{:.12}", metric.lambda(), entropy(&g))
                .expect("string write");
        }
    }
    Ok(PASS)
}

fn export_dot(path: &Path, graph: DotGraph, out: &mut String) -> Outcome {
    let g = load_map(path)?;
    match graph {
        DotGraph::Manifold => outp!(out, "{}", manifold_dot(&g)),
        DotGraph::Transitions => outp!(out, "{}", transition_dot(&g)),
    }
    Ok(PASS)
}
