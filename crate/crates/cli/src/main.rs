//! `cokahler` — checks for Kahler mapping-torus and co-Kahler
//! cohomology over exact rationals.
//!
//! Exit status: 0 = pass, 1 = a check failed, 2 = invalid input,
//! 3 = inconclusive (a check consumed data above the truncation).

mod commands;
mod document;

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{CliReport, Options};
use document::{DocError, LoadedDocument};

#[derive(Parser)]
#[command(
    name = "cokahler",
    version,
    about = "Exact-rational checks for Kahler mapping tori and co-Kahler cohomology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Args)]
struct CommonArgs {
    /// input algebra document (.alg, structured text)
    path: Option<PathBuf>,
    /// write the emitted document (or structured report) here
    #[arg(long)]
    out: Option<PathBuf>,
    /// report rendering
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// degree bound for model construction and degree-capped checks
    #[arg(long)]
    max_degree: Option<usize>,
    /// label of the Kahler class in the document
    #[arg(long, default_value = "omega")]
    omega: String,
    /// label of the circle class in the document
    #[arg(long, default_value = "eta")]
    eta: String,
    /// refuse algebras with total dimension above this cap
    #[arg(long)]
    dim: Option<usize>,
    /// run on every .alg document in a directory
    #[arg(long)]
    batch: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Verify graded-commutativity, associativity, unit, d^2 = 0 and Leibniz
    CheckAxioms(CommonArgs),
    /// Compute the cohomology ring and its Betti numbers
    Cohomology(CommonArgs),
    /// Compute the invariant subalgebra of the document's action
    Invariants(CommonArgs),
    /// Check the hard Lefschetz property for the labeled Kahler class
    CheckKahler(CommonArgs),
    /// Synthesize the mapping-torus cohomology H^G (x) exterior(eta)
    MappingTorus(CommonArgs),
    /// Check the co-Kahler Lefschetz isomorphisms on a model
    CheckCokahlerLefschetz(CommonArgs),
    /// Check the mapping-torus Betti-number relations
    BettiRelations(CommonArgs),
    /// Check Property B (negative-degree derivations vanish)
    PropertyB(CommonArgs),
    /// Certify the toral-rank inequality dim H >= 2^r
    Trc(CommonArgs),
    /// Upper bound on the toral rank from the invariant degree-1 classes
    ToralBound(CommonArgs),
    /// Build the Sullivan minimal model of the (formal) algebra
    MinimalModel(CommonArgs),
    /// Check the minimal model splits as (base model) (x) exterior(eta)
    CheckSplit(CommonArgs),
}

impl Command {
    fn args(&self) -> &CommonArgs {
        match self {
            Command::CheckAxioms(a)
            | Command::Cohomology(a)
            | Command::Invariants(a)
            | Command::CheckKahler(a)
            | Command::MappingTorus(a)
            | Command::CheckCokahlerLefschetz(a)
            | Command::BettiRelations(a)
            | Command::PropertyB(a)
            | Command::Trc(a)
            | Command::ToralBound(a)
            | Command::MinimalModel(a)
            | Command::CheckSplit(a) => a,
        }
    }

    fn execute(&self, l: &LoadedDocument, opts: &Options) -> Result<CliReport, DocError> {
        match self {
            Command::CheckAxioms(_) => commands::check_axioms(l),
            Command::Cohomology(_) => commands::cohomology_cmd(l),
            Command::Invariants(_) => commands::invariants(l),
            Command::CheckKahler(_) => commands::check_kahler(l, opts),
            Command::MappingTorus(_) => commands::mapping_torus(l, opts),
            Command::CheckCokahlerLefschetz(_) => commands::check_cokahler_lefschetz(l, opts),
            Command::BettiRelations(_) => commands::betti_relations(l, opts),
            Command::PropertyB(_) => commands::property_b(l, opts),
            Command::Trc(_) => commands::trc(l),
            Command::ToralBound(_) => commands::toral_bound(l),
            Command::MinimalModel(_) => commands::minimal_model(l, opts),
            Command::CheckSplit(_) => commands::check_split(l, opts),
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    let args = cli.command.args();

    let inputs: Vec<PathBuf> = if let Some(dir) = &args.batch {
        match batch_inputs(dir) {
            Ok(v) => v,
            Err(message) => {
                eprintln!("error: {message}");
                return 2;
            }
        }
    } else if let Some(p) = &args.path {
        vec![p.clone()]
    } else {
        eprintln!("error: provide an input document or --batch DIR");
        return 2;
    };

    let mut worst = 0i32;
    for path in &inputs {
        let code = run_one(&cli.command, args, path, inputs.len() > 1);
        worst = combine(worst, code);
    }
    worst
}

/// Batch severity: invalid input dominates, then failure, then
/// inconclusive, then pass.
fn combine(a: i32, b: i32) -> i32 {
    let rank = |c: i32| match c {
        2 => 3,
        1 => 2,
        3 => 1,
        _ => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn batch_inputs(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let mut out = Vec::new();
    let entries = std::fs::read_dir(dir).map_err(|e| format!("cannot read {dir:?}: {e}"))?;
    for entry in entries {
        let path = entry.map_err(|e| e.to_string())?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("alg") {
            out.push(path);
        }
    }
    out.sort();
    if out.is_empty() {
        return Err(format!("no .alg documents in {dir:?}"));
    }
    Ok(out)
}

fn run_one(command: &Command, args: &CommonArgs, path: &Path, announce: bool) -> i32 {
    let started = Instant::now();
    if announce {
        println!("== {}", path.display());
    }
    let opts = Options {
        max_degree: args.max_degree,
        omega: args.omega.clone(),
        eta: args.eta.clone(),
        dim: args.dim,
    };
    let loaded = match document::load(path) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = match command.execute(&loaded, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };

    // emitted documents go to --out; structured reports go to --out
    // only when no document is emitted
    let mut wrote_out = false;
    if let (Some(out), Some(model)) = (&args.out, &report.model) {
        if let Err(e) = std::fs::write(out, document::serialize(model)) {
            eprintln!("error: cannot write {out:?}: {e}");
            return 2;
        }
        wrote_out = true;
    }
    match args.format {
        Format::Structured => {
            let text = serde_json::to_string_pretty(&report).expect("report serialization");
            match (&args.out, wrote_out) {
                (Some(out), false) => {
                    if let Err(e) = std::fs::write(out, text + "\n") {
                        eprintln!("error: cannot write {out:?}: {e}");
                        return 2;
                    }
                }
                _ => println!("{text}"),
            }
        }
        Format::Text => {
            print!("{}", report.render_text());
            println!("time: {} ms", started.elapsed().as_millis());
        }
    }
    report.exit_code()
}
