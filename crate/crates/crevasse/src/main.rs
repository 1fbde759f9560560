//! Command-line surface: run the law suites, compute duals and
//! completions, enumerate small spectra, replay counterexamples.
//!
//! Exit codes: 0 everything passed, 1 a mathematical check failed or a
//! diagnostic was issued, 2 the request itself was unusable (bad flags,
//! malformed records, out-of-range bounds). Text output is line oriented
//! and stable; every emitted record parses back losslessly.

use std::fs;
use std::io::Read as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crevasse::duality::{completion, dual_algebra, dual_space};
use crevasse::error::{Error, Result};
use crevasse::lattice::all_partitions;
use crevasse::partition_algebra::{coherent_limit_points, enumerate_filter_ultrafilters};
use crevasse::record::{self, Record};
use crevasse::suites::{replay, run_all, run_suite, Bounds, SuiteReport};
use crevasse::tree::TreeModel;
use crevasse::{GroundAlgebra, PartitionSpace};

#[derive(Parser)]
#[command(name = "crevasse", disable_version_flag = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run law suites, or replay one check on a counterexample record.
    Verify {
        /// One of: lattice, algebras, morphisms, duality, tree. All five
        /// when omitted.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_atoms: usize,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Re-run this named check on the record given as input.
        #[arg(long, value_name = "CHECK")]
        replay: Option<String>,
        /// Record file for --replay, "-" for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Swap sides: a structure record yields its spectrum as a space
    /// record, a space record yields its algebra as a structure record.
    Dual {
        /// Record file, "-" for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Complete a space or a tree subspace and grade the canonical map.
    Complete {
        /// Record file, "-" for standard input.
        #[arg(default_value = "-")]
        input: String,
        /// Probe depth for tree records; defaults to the record's bound.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List small objects: all partitions of an algebra, or the spectrum
    /// of a structure.
    Enumerate {
        #[arg(value_enum)]
        kind: EnumerateKind,
        /// Atom count for `partitions`.
        #[arg(long, default_value_t = 3)]
        atoms: usize,
        /// Structure or space record for `spectra`, "-" for standard input.
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EnumerateKind {
    Partitions,
    Spectra,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { suite, max_atoms, max_points, depth, replay, input, format } => {
            let bounds = Bounds { max_atoms, max_points, depth };
            match replay {
                Some(check) => cmd_replay(&check, &input, format),
                None => cmd_verify(suite.as_deref(), &bounds, format),
            }
        }
        Command::Dual { input, format } => cmd_dual(&input, format),
        Command::Complete { input, depth, format } => cmd_complete(&input, depth, format),
        Command::Enumerate { kind, atoms, input, format } => {
            cmd_enumerate(kind, atoms, &input, format)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Record(_)
                | Error::UnknownSuite(_)
                | Error::BadBound(_)
                | Error::DepthOutOfRange { .. } => 2,
                _ => 1,
            })
        }
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Record(format!("cannot read standard input: {e}")))?;
        Ok(buf)
    } else {
        fs::read_to_string(path)
            .map_err(|e| Error::Record(format!("cannot read {path}: {e}")))
    }
}

fn print_value(v: &Value) {
    println!("{v}");
}

// ----------------------------------------------------------------- verify

fn cmd_verify(suite: Option<&str>, bounds: &Bounds, format: Format) -> Result<ExitCode> {
    let reports = match suite {
        Some(name) => vec![run_suite(name, bounds)?],
        None => run_all(bounds)?,
    };
    emit_reports(&reports, format);
    let all_pass = reports.iter().all(SuiteReport::passed);
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn emit_reports(reports: &[SuiteReport], format: Format) {
    match format {
        Format::Json => {
            for r in reports {
                print_value(&r.to_json());
            }
        }
        Format::Text => {
            for r in reports {
                print!("{}", r.render_text());
            }
        }
    }
}

fn cmd_replay(check: &str, input: &str, format: Format) -> Result<ExitCode> {
    let text = read_input(input)?;
    let instance: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Record(format!("invalid JSON: {e}")))?;
    let reproduced = replay(check, &instance)?;
    match format {
        Format::Json => print_value(&json!({ "check": check, "reproduced": reproduced })),
        Format::Text => {
            if reproduced {
                println!("check {check} fail {instance}");
                println!("result fail");
            } else {
                println!("check {check} pass");
                println!("result pass");
            }
        }
    }
    Ok(if reproduced { ExitCode::from(1) } else { ExitCode::SUCCESS })
}

// ------------------------------------------------------------------- dual

fn cmd_dual(input: &str, format: Format) -> Result<ExitCode> {
    let rec = record::parse_record_str(&read_input(input)?)?;
    match rec {
        Record::Structure(bpa) => match dual_space(&bpa) {
            Ok(spectrum) => {
                print_value(&record::emit_space(spectrum.space()));
                Ok(ExitCode::SUCCESS)
            }
            Err(Error::Unstable { witness }) => {
                let cx = record::emit_structure(&bpa);
                match format {
                    Format::Json => print_value(&json!({
                        "error": "unstable",
                        "witness": witness,
                        "counterexample": cx,
                        "replay": "dual-requires-stable-structure",
                    })),
                    Format::Text => {
                        println!("error unstable structure");
                        println!("witness {}", json!(witness));
                        println!("counterexample {cx}");
                        println!("replay dual-requires-stable-structure");
                    }
                }
                Ok(ExitCode::from(1))
            }
            Err(e) => Err(e),
        },
        Record::Space(space) => {
            print_value(&record::emit_structure(dual_algebra(&space).bpa()));
            Ok(ExitCode::SUCCESS)
        }
        _ => Err(Error::Record(
            "dual expects a structure or space record".into(),
        )),
    }
}

// --------------------------------------------------------------- complete

fn cmd_complete(input: &str, depth: Option<usize>, format: Format) -> Result<ExitCode> {
    let rec = record::parse_record_str(&read_input(input)?)?;
    match rec {
        Record::Space(space) => complete_space(&space, format),
        Record::Tree(model) => complete_tree(&model, depth, format),
        _ => Err(Error::Record(
            "complete expects a space or tree record".into(),
        )),
    }
}

fn complete_space(space: &PartitionSpace, format: Format) -> Result<ExitCode> {
    let c = completion(space)?;
    let r = c.report;
    let verdict = if r.homeomorphism {
        "homeomorphism"
    } else if r.dense && r.embedding {
        "dense + embedding, homeomorphism not established"
    } else if r.dense {
        "dense, not embedding"
    } else {
        "not established"
    };
    match format {
        Format::Json => print_value(&json!({
            "completed": record::emit_space(&c.completed),
            "map": c.map.point_map(),
            "report": {
                "uniformly-continuous": r.uniformly_continuous,
                "dense": r.dense,
                "embedding": r.embedding,
                "homeomorphism": r.homeomorphism,
            },
            "verdict": verdict,
        })),
        Format::Text => {
            println!("completed {}", record::emit_space(&c.completed));
            println!("map {}", json!(c.map.point_map()));
            println!("report uniformly-continuous {}", r.uniformly_continuous);
            println!("report dense {}", r.dense);
            println!("report embedding {}", r.embedding);
            println!("report homeomorphism {}", r.homeomorphism);
            println!("verdict {verdict}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn complete_tree(model: &TreeModel, depth: Option<usize>, format: Format) -> Result<ExitCode> {
    let bound = model.depth_bound();
    let probe = depth.unwrap_or(bound);
    if probe > bound {
        return Err(Error::DepthOutOfRange { requested: probe, bound });
    }
    // the completed object adds every missing branch: the full subspace
    // over the same levels
    let completed = TreeModel::binary(bound, crevasse::Subspace::All)?;
    let call = model.completeness();
    let dense = model.density_check(probe)?;
    let embedding = model.is_separating() && model.truncated_completion_bijective(probe)?;
    let homeomorphism = call.complete && dense && embedding;
    let verdict = if homeomorphism {
        "homeomorphism"
    } else if dense && embedding {
        "dense + embedding, homeomorphism not established"
    } else {
        "not established"
    };
    match format {
        Format::Json => {
            let mut v = json!({
                "completed": record::emit_tree(&completed),
                "map-rule": "branch to its chain of level blocks",
                "probe-depth": probe,
                "report": {
                    "uniformly-continuous": true,
                    "dense": dense,
                    "embedding": embedding,
                    "homeomorphism": homeomorphism,
                },
                "verdict": verdict,
            });
            if let Some(b) = &call.unrealized {
                v["unrealized"] = record::emit_branch(b);
            }
            print_value(&v);
        }
        Format::Text => {
            println!("completed {}", record::emit_tree(&completed));
            println!("map-rule branch to its chain of level blocks");
            println!("probe-depth {probe}");
            println!("report uniformly-continuous true");
            println!("report dense {dense}");
            println!("report embedding {embedding}");
            println!("report homeomorphism {homeomorphism}");
            if let Some(b) = &call.unrealized {
                println!("unrealized {}", record::emit_branch(b));
            }
            println!("verdict {verdict}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

// -------------------------------------------------------------- enumerate

fn cmd_enumerate(
    kind: EnumerateKind,
    atoms: usize,
    input: &str,
    format: Format,
) -> Result<ExitCode> {
    match kind {
        EnumerateKind::Partitions => {
            if !(1..=6).contains(&atoms) {
                return Err(Error::BadBound(format!(
                    "enumeration is capped at 6 atoms, got {atoms}"
                )));
            }
            let algebra = GroundAlgebra::new(atoms)?;
            let parts = all_partitions(algebra);
            match format {
                Format::Json => print_value(&json!({
                    "algebra": record::emit_algebra(algebra),
                    "count": parts.len(),
                    "partitions": parts
                        .iter()
                        .map(record::emit_partition)
                        .collect::<Vec<_>>(),
                })),
                Format::Text => {
                    for p in &parts {
                        println!("partition {}", record::emit_partition(p));
                    }
                    println!("count {}", parts.len());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        EnumerateKind::Spectra => {
            let bpa = match record::parse_record_str(&read_input(input)?)? {
                Record::Structure(bpa) => bpa,
                Record::Space(space) => space.as_partition_algebra(),
                _ => {
                    return Err(Error::Record(
                        "spectra expects a structure or space record".into(),
                    ))
                }
            };
            if bpa.algebra().atom_count() > 6 {
                return Err(Error::BadBound(format!(
                    "enumeration is capped at 6 atoms, got {}",
                    bpa.algebra().atom_count()
                )));
            }
            let ultras = enumerate_filter_ultrafilters(&bpa)?;
            let points = coherent_limit_points(bpa.filter());
            match format {
                Format::Json => print_value(&json!({
                    "algebra": record::emit_algebra(bpa.algebra()),
                    "spectrum": ultras.iter().map(|u| u.atom()).collect::<Vec<_>>(),
                    "selections": points
                        .iter()
                        .map(|pt| record::emit_element(pt.base_choice()))
                        .collect::<Vec<_>>(),
                })),
                Format::Text => {
                    for u in &ultras {
                        println!("ultrafilter atom {}", u.atom());
                    }
                    for pt in &points {
                        println!("selection base-choice {}", record::emit_element(pt.base_choice()));
                    }
                    println!("count {}", ultras.len());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
