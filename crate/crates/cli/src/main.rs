use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lperm_cli::scenario::{parse_scenario, Scenario, SuiteName};
use lperm_cli::suites;
use lperm_core::cert::{check_cert, WitnessCert};

#[derive(Parser)]
#[command(name = "lperm")]
#[command(about = "Exact-arithmetic witness suites for lattice-ordered permutation groups")]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Commands,
}

#[derive(Subcommand)]
enum Commands {
    /// Run the suites of a scenario file, writing certificates and a report
    Run {
        /// Path to the scenario file ("key=value; ..." entries)
        scenario: PathBuf,
        /// Override the scenario seed
        #[arg(long)]
        seed: Option<u64>,
        /// Override the scenario trial count
        #[arg(long)]
        trials: Option<usize>,
        /// Output directory for certificates and the report
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file by evaluation alone
    Verify {
        /// Path to a certificate file
        cert: PathBuf,
    },
    /// Parse → print → parse a file of serialized elements or a certificate
    Roundtrip {
        /// Path to the file
        file: PathBuf,
    },
    /// Run a small built-in scenario for one suite and print a certificate
    Demo {
        /// One of: lemma31, lemma41, lemma42, centralizer, oprim, algebra
        suite: String,
        /// Seed for the demo run
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trials for the demo run
        #[arg(long, default_value_t = 4)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    match dispatch() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}

fn dispatch() -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cli = Cli::parse();
    match cli.command {
        Commands::Run { scenario, seed, trials, out } => {
            let text = fs::read_to_string(&scenario)?;
            let mut sc = parse_scenario(&text)?;
            if let Some(s) = seed {
                sc.seed = s;
            }
            if let Some(t) = trials {
                sc.trials = t;
            }
            let out_dir = out.or_else(|| sc.output.clone()).unwrap_or_else(|| PathBuf::from("lperm-out"));
            let report = suites::run(&sc, Some(out_dir.clone()))?;
            print!("{}", report.body());
            for suite in &report.suites {
                eprintln!("# suite {} took {} ms", suite.suite, suite.elapsed_ms);
            }
            eprintln!("# certificates and report written to {}", out_dir.display());
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Commands::Verify { cert } => {
            let text = fs::read_to_string(&cert)?;
            let parsed = WitnessCert::from_text(&text)?;
            let ok = check_cert(&parsed)?;
            println!("{} {}", if ok { "PASS" } else { "FAIL" }, parsed.claim());
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Commands::Roundtrip { file } => {
            let ok = suites::roundtrip(&file)?;
            println!("{}", if ok { "PASS" } else { "FAIL" });
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Commands::Demo { suite, seed, trials } => {
            let suite: SuiteName = suite.parse().map_err(|e| format!("{}", e))?;
            let model = match suite {
                SuiteName::Centralizer | SuiteName::Lemma42 => "PL2T,PL2T",
                SuiteName::Lemma41 => "PL2T,PL2T,PL2T",
                SuiteName::Oprim => "PL2T,REG",
                _ => "PL2T",
            };
            let sc = Scenario {
                model: parse_scenario(&format!("model={}; suite={}", model, suite))?.model,
                suites: vec![suite],
                trials,
                seed,
                output: None,
            };
            let (report, certs) = suites::run_collecting(&sc, None)?;
            print!("{}", report.body());
            if let Some((name, text)) = certs.first() {
                println!("--- {} ---", name);
                print!("{}", text);
            }
            Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
