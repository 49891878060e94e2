//! Command-line front end for the qkc library.
//!
//! Exit codes: 0 all good, 1 a verification assertion failed, 2 a search
//! exhausted its ceiling without a hit, 3 bad input (files, flags).
//! Reports go to stdout; timing and failure summaries go to stderr, so
//! stdout stays byte-identical across reruns and shard counts.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use qkc::error::{QkcError, Result};
use qkc::io::{self, LoadedState};
use qkc::kolm::{self, InterpreterId};
use qkc::state::{fidelity, fidelity_pure, fidelity_pure_mixed, holevo_chi};
use qkc::sym;
use qkc::verify::{self, SuiteOutcome};

#[derive(Parser)]
#[command(name = "qkc", version, about = "Quantum state toolkit: fidelity, entropy, coding, and shortest-program search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity between two state files (pure, mixed, or one of each)
    Fidelity {
        state_a: PathBuf,
        state_b: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Von Neumann entropy of a state file, in bits
    Entropy {
        state: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Holevo chi of an ensemble file, in bits
    Chi {
        ensemble: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Shortest program reaching a fidelity target for a pure-state file
    QcSearch {
        state: PathBuf,
        #[arg(long, default_value_t = 0.999)]
        fidelity_target: f64,
        #[arg(long, default_value_t = 12)]
        max_length: u32,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long, value_enum, default_value_t = Interp::A)]
        interpreter: Interp,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Description-length bound for m copies of an l-qubit state
    CopiesBound {
        #[arg(long)]
        qubits: u32,
        #[arg(long)]
        copies: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Run a named verification suite; one JSON line per assertion
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_length: Option<u32>,
        #[arg(long)]
        fidelity_target: Option<f64>,
        /// Bit length n for the counting suite
        #[arg(long)]
        n: Option<u32>,
        /// Savings c for the counting suite
        #[arg(long)]
        c: Option<u32>,
        /// Letter dimension for the sym suite
        #[arg(long = "D")]
        letter_dim: Option<usize>,
        /// Copy count for the sym suite
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Interp {
    A,
    B,
}

impl From<Interp> for InterpreterId {
    fn from(i: Interp) -> Self {
        match i {
            Interp::A => InterpreterId::A,
            Interp::B => InterpreterId::B,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Monotonicity,
    Composition,
    TensorPower,
    Sym,
    Schumacher,
    Incompressibility,
    Counting,
    Invariance,
    Copies,
    Blockcode,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Fidelity { state_a, state_b, format } => {
            let a = load_state(&state_a)?;
            let b = load_state(&state_b)?;
            let value = match (&a, &b) {
                (LoadedState::Pure(p), LoadedState::Pure(q)) => fidelity_pure(p, q)?,
                (LoadedState::Pure(p), LoadedState::Density(r))
                | (LoadedState::Density(r), LoadedState::Pure(p)) => {
                    fidelity_pure_mixed(p, r)?
                }
                (LoadedState::Density(r), LoadedState::Density(s)) => fidelity(r, s)?,
            };
            print_scalar("fidelity", value, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Entropy { state, format } => {
            let value = load_state(&state)?.to_density().von_neumann_entropy();
            print_scalar("entropy", value, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Chi { ensemble, format } => {
            let text = read_file(&ensemble)?;
            let ens = io::parse_ensemble(&text)
                .map_err(|e| input_error(&ensemble, e))?;
            print_scalar("chi", holevo_chi(&ens)?, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::QcSearch { state, fidelity_target, max_length, shards, interpreter, format } => {
            let loaded = load_state(&state)?;
            let pure = loaded.as_pure().map_err(|e| input_error(&state, e))?;
            let started = Instant::now();
            let estimate =
                kolm::qc_search_on(interpreter.into(), pure, fidelity_target, max_length, shards)?;
            eprintln!(
                "searched {} programs in {:.3}s",
                estimate.programs_evaluated,
                started.elapsed().as_secs_f64()
            );
            print_report(&estimate, format);
            Ok(if estimate.min_length.is_some() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::CopiesBound { qubits, copies, format } => {
            let bound = sym::copies_upper_bound(qubits, copies)?;
            print_report(&bound, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            seed,
            trials,
            shards,
            tol,
            max_length,
            fidelity_target,
            n,
            c,
            letter_dim,
            m,
            format,
        } => {
            let started = Instant::now();
            let outcome = match suite {
                Suite::Monotonicity => verify::run_monotonicity(
                    seed,
                    trials.unwrap_or(1000),
                    shards,
                    tol.unwrap_or(1e-7),
                )?,
                Suite::Composition => verify::run_composition(
                    seed,
                    trials.unwrap_or(500),
                    shards,
                    tol.unwrap_or(1e-9),
                )?,
                Suite::TensorPower => verify::run_tensor_power(
                    seed,
                    trials.unwrap_or(200),
                    shards,
                    tol.unwrap_or(1e-7),
                )?,
                Suite::Sym => verify::run_sym(
                    letter_dim.unwrap_or(2),
                    m.unwrap_or(2),
                    seed,
                    trials.unwrap_or(20),
                )?,
                Suite::Schumacher => verify::run_schumacher(seed)?,
                Suite::Incompressibility => verify::run_incompressibility(
                    fidelity_target.unwrap_or(0.75),
                    max_length.unwrap_or(12),
                    shards,
                )?,
                Suite::Counting => verify::run_counting(n.unwrap_or(4), c.unwrap_or(2))?,
                Suite::Invariance => verify::run_invariance(
                    seed,
                    trials.unwrap_or(20),
                    fidelity_target.unwrap_or(0.9),
                    max_length.unwrap_or(14),
                    shards,
                )?,
                Suite::Copies => {
                    verify::run_copies(seed, max_length.unwrap_or(15), shards)?
                }
                Suite::Blockcode => {
                    verify::run_blockcode(seed, trials.unwrap_or(100), shards)?
                }
            };
            print_suite(&outcome, format);
            eprintln!(
                "suite {}: {} passed, {} failed in {:.3}s",
                outcome.suite,
                outcome.passed,
                outcome.failed,
                started.elapsed().as_secs_f64()
            );
            if let Some(line) = outcome.first_failure() {
                eprintln!("first failing assertion: {}", line);
            }
            Ok(if outcome.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| QkcError::InvalidArgument(format!("{}: {}", path.display(), e)))
}

fn input_error(path: &Path, e: QkcError) -> QkcError {
    // Unwrap one "invalid argument:" layer so the path prefixes cleanly.
    let msg = match e {
        QkcError::InvalidArgument(m) => m,
        other => other.to_string(),
    };
    QkcError::InvalidArgument(format!("{}: {}", path.display(), msg))
}

fn load_state(path: &Path) -> Result<LoadedState> {
    io::parse_state(&read_file(path)?).map_err(|e| input_error(path, e))
}

fn print_scalar(name: &str, value: f64, format: Format) {
    match format {
        Format::Json => println!("{{\"{}\":{:.6}}}", name, value),
        Format::Csv => println!("{}\n{:.6}", name, value),
    }
}

fn print_report<T: serde::Serialize>(report: &T, format: Format) {
    match format {
        Format::Json => {
            println!("{}", serde_json::to_string(report).expect("report serializes"));
        }
        Format::Csv => {
            let value = serde_json::to_value(report).expect("report serializes");
            let obj = value.as_object().expect("reports are objects");
            let header: Vec<&str> = obj.keys().map(String::as_str).collect();
            let row: Vec<String> = obj
                .values()
                .map(|v| csv_field(&serde_json::to_string(v).expect("field serializes")))
                .collect();
            println!("{}", header.join(","));
            println!("{}", row.join(","));
        }
    }
}

fn print_suite(outcome: &SuiteOutcome, format: Format) {
    match format {
        Format::Json => {
            for line in &outcome.lines {
                println!("{}", line);
            }
        }
        Format::Csv => {
            println!("case,detail,pass,suite");
            for line in &outcome.lines {
                let value: serde_json::Value =
                    serde_json::from_str(line).expect("suite lines are JSON");
                let obj = value.as_object().expect("suite lines are objects");
                let fields: Vec<String> = ["case", "detail", "pass", "suite"]
                    .iter()
                    .map(|k| {
                        let v = &obj[*k];
                        match v {
                            serde_json::Value::String(s) => csv_field(s),
                            other => csv_field(
                                &serde_json::to_string(other).expect("field serializes"),
                            ),
                        }
                    })
                    .collect();
                println!("{}", fields.join(","));
            }
        }
    }
}

// Standard CSV quoting: wrap when the field holds a comma, quote, or newline.
fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}
