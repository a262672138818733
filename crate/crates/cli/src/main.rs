use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anewdsc::eval::DEFAULT_PRECISION_CAP;
use anewdsc::isolate::{Config, DEFAULT_ITERATION_CAP};
use anewdsc_cli::format::{read_document, Document, Polynomial};
use anewdsc_cli::generate::{Family, Params};
use anewdsc_cli::job::{bench_report, isolate_report, refine_report, Report};
use anewdsc_cli::verify::verify_all;
use anewdsc_cli::{CliError, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "anewdsc", version, about = "Certified real root isolation and refinement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    caps: Caps,
}

#[derive(Args)]
struct Caps {
    /// Largest coefficient quality, in bits, any approximation may use.
    #[arg(long, global = true, env = "ANEWDSC_PRECISION_CAP", default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: u64,
    /// Largest number of intervals processed per polynomial.
    #[arg(long, global = true, env = "ANEWDSC_ITERATION_CAP", default_value_t = DEFAULT_ITERATION_CAP)]
    iteration_cap: u64,
}

#[derive(Args)]
struct Modes {
    /// Disable the Boundary- and Newton-Tests.
    #[arg(long)]
    bisection_only: bool,
    /// Start from one interval covering all roots.
    #[arg(long)]
    single_initial_interval: bool,
    /// Replace the input by its square-free part first.
    #[arg(long)]
    square_free: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Isolate the real roots of every polynomial in a file.
    Isolate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        modes: Modes,
    },
    /// Shrink isolating intervals below width 2^-kappa.
    Refine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        kappa: u64,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        modes: Modes,
    },
    /// Generate a polynomial from a named family and solve it.
    Bench {
        /// mignotte, wilkinson, random-dense, random-sparse or chebyshev-like
        #[arg(value_name = "FAMILY", required_unless_present = "family")]
        family_name: Option<String>,
        #[arg(long, conflicts_with = "family_name")]
        family: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        tau: Option<u32>,
        #[arg(long)]
        terms: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also refine to width 2^-kappa.
        #[arg(long)]
        kappa: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        modes: Modes,
    },
    /// Isolate and check the result against exact Sturm counts. Accepts a
    /// file or a directory of JSON files.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn config(caps: &Caps, modes: Option<&Modes>) -> Config {
    Config {
        iteration_cap: caps.iteration_cap,
        precision_cap: caps.precision_cap,
        bisection_only: modes.is_some_and(|m| m.bisection_only),
        single_initial_interval: modes.is_some_and(|m| m.single_initial_interval),
    }
}

fn prepare(p: Polynomial, modes: &Modes) -> Result<Polynomial> {
    if modes.square_free {
        p.square_free()
    } else {
        Ok(p)
    }
}

fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match output {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| CliError::Io(path.to_owned(), e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

/// One report for a single polynomial, a list otherwise.
fn emit_reports(reports: Vec<Report>, output: Option<&Path>) -> Result<()> {
    if reports.len() == 1 {
        emit(&reports[0], output)
    } else {
        emit(&serde_json::json!({ "results": reports }), output)
    }
}

fn read_inputs(path: &Path) -> Result<Vec<Polynomial>> {
    if !path.is_dir() {
        return Ok(read_document(path)?.polynomials);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .map_err(|e| CliError::Io(path.to_owned(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut out = Vec::new();
    for f in files {
        let stem = f.file_stem().map(|s| s.to_string_lossy().into_owned());
        for mut p in read_document(&f)?.polynomials {
            if p.name.is_none() {
                p.name = stem.clone();
            }
            out.push(p);
        }
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Isolate { input, output, modes } => {
            let cfg = config(&cli.caps, Some(&modes));
            let doc = read_document(&input)?;
            let reports = doc
                .polynomials
                .into_iter()
                .map(|p| isolate_report(&prepare(p, &modes)?, &cfg))
                .collect::<Result<Vec<_>>>()?;
            emit_reports(reports, output.as_deref())?;
        }
        Command::Refine { input, kappa, output, modes } => {
            let cfg = config(&cli.caps, Some(&modes));
            let Document { polynomials, intervals } = read_document(&input)?;
            let reports = polynomials
                .into_iter()
                .map(|p| {
                    let given = if modes.square_free { None } else { intervals.clone() };
                    refine_report(&prepare(p, &modes)?, given, kappa, &cfg)
                })
                .collect::<Result<Vec<_>>>()?;
            emit_reports(reports, output.as_deref())?;
        }
        Command::Bench { family_name, family, n, a, k, tau, terms, seed, kappa, output, modes } => {
            let cfg = config(&cli.caps, Some(&modes));
            let name = family.or(family_name).expect("clap requires a family");
            let params = Params { n, a, k, tau, terms, seed };
            let p = prepare(Family::from_name(&name, &params)?.generate(), &modes)?;
            emit(&bench_report(&p, kappa, &cfg)?, output.as_deref())?;
        }
        Command::Verify { input, output } => {
            let cfg = config(&cli.caps, None);
            let verdicts = verify_all(&read_inputs(&input)?, &cfg);
            for v in &verdicts {
                let status = if v.pass { "PASS" } else { "FAIL" };
                println!("{status} {} ({} roots)", v.name, v.roots);
                for p in &v.problems {
                    println!("    {p}");
                }
            }
            if output.is_some() {
                emit(&verdicts, output.as_deref())?;
            }
            return Ok(verdicts.iter().all(|v| v.pass));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
