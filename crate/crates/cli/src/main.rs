use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gbs_core::fullreduce::full_reduce;
use gbs_core::moduli::{integral_coset, invariants_json, modular_group};
use gbs_core::moves::{reduce, Deformation};
use gbs_core::slidespace::{decide_isomorphic_with_budget, slide_closure, DEFAULT_MAX_STATES};
use gbs_core::{
    normalize_cse, parse_graph, pattern_summary, Error, ExponentVector, Graph, IsoVerdict, MoveSequenceRun,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "gbs",
    version,
    about = "Generalized Baumslag-Solitar graphs: moves, invariants, isomorphism"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a graph file is well formed.
    Validate { graph: PathBuf },
    /// Collapse every collapsible edge.
    Reduce { graph: PathBuf },
    /// Modular invariants of a graph.
    Invariants { graph: PathBuf },
    /// Integers in the modular coset of each edge index.
    Coset {
        graph: PathBuf,
        #[arg(long, default_value_t = 8)]
        bound: i64,
    },
    /// Reduce as far as admissible paths allow.
    Fullreduce {
        graph: PathBuf,
        #[arg(long, default_value_t = 16)]
        depth: usize,
    },
    /// All reduced graphs reachable by slides.
    Closure {
        graph: PathBuf,
        #[arg(long, env = "GBS_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Decide whether two graphs give isomorphic groups.
    Iso {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, env = "GBS_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
        max_states: usize,
    },
    /// Rewrite a deformation into collapses, slides, expansions.
    Normalize { graph: PathBuf, deformation: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

enum Failure {
    Core(Error),
    Io(PathBuf, std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn record(&self) -> Value {
        match self {
            Failure::Core(e) => json!({"error": e.code(), "message": e.to_string()}),
            Failure::Io(p, e) => json!({"error": "Io", "message": format!("{}: {e}", p.display())}),
        }
    }
}

enum Output {
    Json(Value),
    Text(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(parse_graph(&read(path)?)?)
}

fn graph_value(g: &Graph) -> Value {
    serde_json::to_value(g.to_json_value()).expect("graph serializes")
}

fn run(cmd: Command) -> Result<(Output, u8), Failure> {
    let ok = |v: Value| Ok((Output::Json(v), 0));
    match cmd {
        Command::Validate { graph } => {
            let g = load_graph(&graph)?;
            ok(json!({
                "valid": true,
                "vertices": g.vertex_count(),
                "edge_pairs": g.edge_pair_count(),
                "betti": g.betti(),
                "reduced": g.is_reduced(),
            }))
        }
        Command::Reduce { graph } => {
            let (g, d) = reduce(&load_graph(&graph)?);
            ok(json!({"graph": graph_value(&g), "deformation": d}))
        }
        Command::Invariants { graph } => ok(invariants_json(&load_graph(&graph)?)),
        Command::Coset { graph, bound } => {
            let g = load_graph(&graph)?;
            let l = modular_group(&g);
            let mut ends = Vec::new();
            for h in g.ends() {
                let i = g.index(&h)?;
                let set = integral_coset(&ExponentVector::from_int(i.unsigned_abs()), &l, bound)?;
                ends.push(json!({"end": h, "index": i, "coset": set}));
            }
            ok(json!({"bound": bound, "ends": ends}))
        }
        Command::Fullreduce { graph, depth } => {
            let out = full_reduce(&load_graph(&graph)?, depth)?;
            ok(json!({
                "graph": graph_value(&out.graph),
                "deformation": out.deformation,
                "exhaustive": out.exhaustive,
                "depth": depth,
            }))
        }
        Command::Closure { graph, max_states, format } => {
            let g = reduce(&load_graph(&graph)?).0;
            let c = slide_closure(&g, max_states)?;
            match format {
                Format::Json => ok(c.to_json_value()),
                Format::Dot => Ok((Output::Text(c.to_dot()), 0)),
            }
        }
        Command::Iso { a, b, max_states } => {
            let (ga, gb) = (load_graph(&a)?, load_graph(&b)?);
            let verdict = decide_isomorphic_with_budget(&ga, &gb, max_states)?;
            let code = if verdict == IsoVerdict::Isomorphic { 0 } else { 1 };
            Ok((Output::Json(json!({"verdict": verdict})), code))
        }
        Command::Normalize { graph, deformation } => {
            let g = load_graph(&graph)?;
            let d = Deformation::from_json(&read(&deformation)?)?;
            let out = normalize_cse(&MoveSequenceRun::new(g, d)?)?;
            ok(json!({
                "deformation": out.moves,
                "pattern": pattern_summary(&out.moves),
                "end": graph_value(&out.end),
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let compact = matches!(cli.command, Command::Iso { .. });
    match run(cli.command) {
        Ok((Output::Json(v), code)) => {
            let text = if compact { v.to_string() } else { serde_json::to_string_pretty(&v).unwrap() };
            println!("{text}");
            ExitCode::from(code)
        }
        Ok((Output::Text(s), code)) => {
            print!("{s}");
            ExitCode::from(code)
        }
        Err(f) => {
            let rec = f.record();
            eprintln!("gbs: {}", rec["message"].as_str().unwrap_or_default());
            println!("{rec}");
            ExitCode::from(2)
        }
    }
}
