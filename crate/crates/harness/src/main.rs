use std::path::PathBuf;
use std::process::ExitCode;

use bochner_core::bernstein::catalog_entries;
use bochner_harness::scenario::resolve_scenario;
use bochner_harness::{
    load_scenario, run_scenario, RunOptions, EXIT_CHECK_FAILURE, EXIT_CONFIG_ERROR, EXIT_PASS,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(name = "bochner", version, about = "Run Bochner–Phillips calculus scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Execute every check of a scenario file.
    Run {
        file: PathBuf,
        /// Directory for report.json, metadata.json and CSV artifacts.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Format of the report printed on stdout.
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Worker threads for independent checks.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List built-in Bernstein functions and tuple generators.
    ListCatalog {
        #[arg(long)]
        json: bool,
        /// Also list the functions defined by a scenario file.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
}

const RAW: [(&str, &str); 1] = [("triplet", "c0, c1 (n-vector), atoms [{point, mass}]")];

const TUPLE_GENERATORS: [(&str, &str); 4] = [
    ("explicit", "matrices (row-major), optional imag"),
    ("diagonal", "diagonals, one per generator"),
    (
        "planted",
        "basis {identity | orthogonal(seed) | general(seed) | explicit(rows)}, eigenvalues",
    ),
    ("random_pair", "seed, arity, dim, basis kind, perturbed"),
];

fn list_catalog(as_json: bool, scenario: Option<PathBuf>) -> Result<(), String> {
    let scenario_functions: Vec<(String, String)> = match scenario {
        Some(path) => {
            let s = load_scenario(&path).map_err(|e| e.to_string())?;
            let r = resolve_scenario(&s).map_err(|e| e.to_string())?;
            r.functions
                .iter()
                .map(|(id, f)| (id.clone(), f.label()))
                .collect()
        }
        None => Vec::new(),
    };
    let entries = catalog_entries();
    if as_json {
        let v = json!({
            "functions": entries,
            "raw": RAW
                .iter()
                .map(|(n, p)| json!({ "name": n, "parameters": p }))
                .collect::<Vec<_>>(),
            "tuple_generators": TUPLE_GENERATORS
                .iter()
                .map(|(n, p)| json!({ "name": n, "parameters": p }))
                .collect::<Vec<_>>(),
            "scenario_functions": scenario_functions
                .iter()
                .map(|(id, l)| json!({ "id": id, "label": l }))
                .collect::<Vec<_>>(),
        });
        println!("{}", serde_json::to_string_pretty(&v).expect("listing serializes"));
        return Ok(());
    }
    println!("functions:");
    for e in &entries {
        println!(
            "  {:<16} {}  [{}; first moment {}; widder {}]",
            e.name,
            e.formula,
            e.parameters,
            e.first_moment,
            if e.widder { "yes" } else { "no" }
        );
    }
    println!("raw triplets:");
    for (n, p) in RAW {
        println!("  {n:<16} {p}");
    }
    println!("tuple generators:");
    for (n, p) in TUPLE_GENERATORS {
        println!("  {n:<16} {p}");
    }
    if !scenario_functions.is_empty() {
        println!("scenario functions:");
        for (id, l) in scenario_functions {
            println!("  {id:<16} {l}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListCatalog { json, scenario } => match list_catalog(json, scenario) {
            Ok(()) => ExitCode::from(EXIT_PASS as u8),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_CONFIG_ERROR as u8)
            }
        },
        Command::Run {
            file,
            out_dir,
            format,
            jobs,
        } => {
            let scenario = match load_scenario(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG_ERROR as u8);
                }
            };
            let out = match run_scenario(&scenario, RunOptions { jobs }) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_CONFIG_ERROR as u8);
                }
            };
            match format {
                Format::Json => print!("{}", out.report.to_json()),
                Format::Csv => print!("{}", out.report.summary_csv()),
            }
            let dir = out_dir.or_else(|| scenario.output.as_ref().map(|o| PathBuf::from(&o.dir)));
            if let Some(dir) = dir {
                if let Err(e) = out.report.write_artifacts(&dir, &out.metadata) {
                    eprintln!("error: cannot write artifacts to {}: {e}", dir.display());
                    return ExitCode::from(EXIT_CHECK_FAILURE as u8);
                }
            }
            for c in &out.report.checks {
                eprintln!(
                    "[{}] {:>3} {:<20} {}{}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.index,
                    c.op,
                    c.label.as_deref().unwrap_or(""),
                    c.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
                );
            }
            let passed = out.report.checks.iter().filter(|c| c.pass).count();
            eprintln!(
                "{}: {passed}/{} checks passed in {:.3}s",
                out.report.scenario,
                out.report.checks.len(),
                out.metadata.wall_clock_seconds
            );
            if out.report.pass {
                ExitCode::from(EXIT_PASS as u8)
            } else {
                ExitCode::from(EXIT_CHECK_FAILURE as u8)
            }
        }
    }
}
