//! Command-line front end. Exit codes: 0 pass, 1 theorem violation, 2 usage or spec error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::criteria::{gelfand_report, pm_localization_chain, pm_report, pm_stability_check, CriteriaReport};
use crate::error::{Error, Result};
use crate::report::{guard, load_ring, read_spec, report_table, run_table, verify_corpus};
use crate::ring::{GradedRing, HeightBound};

#[derive(Parser, Debug)]
#[command(name = "gelfand", version, about = "Exact checks of Gelfand and pm+ properties of graded rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Height bound for element searches on infinite rings.
    #[arg(long, global = true, default_value_t = 8)]
    pub bound: u32,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit the structured JSON record.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homogeneous spectrum of a ring.
    Spectrum {
        file: PathBuf,
        /// Emit a DOT digraph instead of the listing.
        #[arg(long)]
        dot: bool,
    },
    /// Gelfand criteria report.
    Criteria { file: PathBuf },
    /// pm+ criteria, localization chain and stability reports.
    Pm { file: PathBuf },
    /// Runs every check on each ring of a corpus directory.
    Verify {
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
    },
    /// Writes the spectrum as a DOT digraph.
    ExportDot {
        file: PathBuf,
        /// Output path; stdout when absent.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn load(file: &PathBuf, cli: &Cli) -> Result<(GradedRing, HeightBound)> {
    let spec = read_spec(file)?;
    let bound = HeightBound(spec.bound.unwrap_or(cli.bound));
    Ok((load_ring(&spec, bound, cli.seed)?, bound))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

fn code_for(reports: &[&CriteriaReport]) -> i32 {
    if reports.iter().any(|r| r.consistency.is_violation()) {
        1
    } else {
        0
    }
}

fn run_inner(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Spectrum { file, dot } => {
            let (ring, _) = load(file, cli)?;
            let spec = guard(|| ring.spectrum())?;
            if *dot {
                print!("{}", spec.to_dot(ring.description()));
            } else if cli.json {
                println!("{}", json(&spec.record()));
            } else {
                println!("{ring}: {} homogeneous primes", spec.len());
                for i in 0..spec.len() {
                    let mark = if spec.is_maximal(i) { " (maximal)" } else { "" };
                    println!("  [{i}] {}{mark}", spec.label(i));
                }
                for (a, b) in spec.poset.covers() {
                    println!("  [{a}] < [{b}]");
                }
            }
            Ok(0)
        }
        Command::Criteria { file } => {
            let (ring, bound) = load(file, cli)?;
            let rep = guard(|| gelfand_report(&ring, bound))?;
            if cli.json {
                println!("{}", json(&rep));
            } else {
                print!("{}", report_table(&rep));
            }
            Ok(code_for(&[&rep]))
        }
        Command::Pm { file } => {
            let (ring, bound) = load(file, cli)?;
            let reps = guard(|| {
                Ok(vec![
                    pm_report(&ring, bound)?,
                    pm_localization_chain(&ring, bound)?,
                    pm_stability_check(&ring, bound, cli.seed)?,
                ])
            })?;
            if cli.json {
                println!("{}", json(&reps));
            } else {
                for r in &reps {
                    print!("{}", report_table(r));
                }
            }
            Ok(code_for(&reps.iter().collect::<Vec<_>>()))
        }
        Command::Verify { corpus } => {
            let run = verify_corpus(corpus, HeightBound(cli.bound), cli.seed)?;
            if cli.json {
                println!("{}", json(&run));
            } else {
                print!("{}", run_table(&run));
            }
            for v in &run.violations {
                eprintln!("counterexample: {v}");
            }
            for e in &run.spec_errors {
                eprintln!("spec error: {e}");
            }
            Ok(run.exit_code())
        }
        Command::ExportDot { file, out } => {
            let (ring, _) = load(file, cli)?;
            let dot = guard(|| ring.spectrum())?.to_dot(ring.description());
            match out {
                Some(p) => std::fs::write(p, dot).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
                None => print!("{dot}"),
            }
            Ok(0)
        }
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(Error::TheoremViolation(msg)) => {
            eprintln!("theorem violation: {msg}");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
