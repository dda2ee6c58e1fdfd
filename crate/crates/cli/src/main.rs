//! `qwgt-lab`: exact QWGT and ±J spin-glass partition functions from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error, 3 size guard
//! or enumeration cap exceeded, 4 domain error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qwgt_lab::DEFAULT_CAP;

use commands::{CliError, CliResult, Coupling, Method, Output, QwgtMethod, Settings, VerifyOptions, ZOptions};

const CAP_ENV: &str = "QWGT_LAB_CAP";

#[derive(Parser)]
#[command(name = "qwgt-lab", version, about = "Exact QWGT and ±J spin-glass partition functions")]
struct Cli {
    /// Largest number of enumerated terms [default: $QWGT_LAB_CAP or 2^28].
    #[arg(long, global = true)]
    cap: Option<u64>,
    /// Worker threads for parallel enumeration (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the JSON output to this file.
    #[arg(long = "json-out", global = true)]
    json_out: Option<PathBuf>,
    /// Report wall-clock times (makes output run-dependent).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CouplingArgs {
    /// Coupling βJ: decimal, "p/q", or {"re":..,"im":..}.
    #[arg(long = "betaJ", allow_hyphen_values = true)]
    beta_j: Option<String>,
    /// λ = tanh βJ: "p/q" for exact arithmetic, a decimal, or complex.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Bond bits overriding the file's "w", e.g. 010.
    #[arg(long)]
    w: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Partition function of a ±J graph.
    ZEval {
        graph: PathBuf,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long, value_enum, default_value = "kernel")]
        method: Method,
        /// Series truncation order (series method only) [default: |E|].
        #[arg(long)]
        order: Option<usize>,
        /// Uniform field signs per vertex, 0 for +J and 1 for -J (direct and kernel only).
        #[arg(long)]
        field: Option<String>,
    },
    /// QWGT S(A, B, x, y) from an instance file.
    QwgtEval {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "kernel")]
        method: QwgtMethod,
    },
    /// Sign of S(A, ltr(A), k, l) and the promise check.
    KlSign {
        matrix: PathBuf,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        l: i64,
    },
    /// Two-state Potts partition function of a crossing file, via the QWGT and directly.
    Kauffman { crossings: PathBuf },
    /// GF(2) kernel basis of a matrix file or of a graph's incidence matrix.
    KernelBasis { file: PathBuf },
    /// High-temperature series coefficients and partial sums.
    Series {
        graph: PathBuf,
        #[command(flatten)]
        coupling: CouplingArgs,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Cross-check every feasible method on seeded random bonds and couplings.
    Verify {
        graph: PathBuf,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
        /// Where to write the worst offending instance on failure.
        #[arg(long, default_value = "verify_failure.json")]
        dump: PathBuf,
    },
}

fn resolve_cap(flag: Option<u64>) -> CliResult<u64> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("{CAP_ENV} must be a nonnegative integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn run(cli: Cli) -> CliResult<Output> {
    let settings = Settings {
        cap: resolve_cap(cli.cap)?,
        timings: cli.timings,
    };
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::input(format!("--threads: {e}")))?;
    }
    match cli.command {
        Command::ZEval {
            graph,
            coupling,
            method,
            order,
            field,
        } => {
            let input = commands::load_graph(&graph, coupling.w.as_deref())?;
            let c = Coupling::from_flags(coupling.beta_j.as_deref(), coupling.lambda.as_deref())?;
            let opts = ZOptions {
                method,
                order,
                field: commands::parse_field(field.as_deref(), input.graph.num_vertices())?,
            };
            commands::z_eval(input, &c, &opts, settings)
        }
        Command::QwgtEval { instance, method } => commands::qwgt_eval(&instance, method, settings),
        Command::KlSign { matrix, k, l } => commands::kl_sign_cmd(&matrix, k, l),
        Command::Kauffman { crossings } => commands::kauffman(&crossings, settings),
        Command::KernelBasis { file } => commands::kernel_basis_cmd(&file),
        Command::Series {
            graph,
            coupling,
            order,
        } => {
            let input = commands::load_graph(&graph, coupling.w.as_deref())?;
            let c = Coupling::from_flags(coupling.beta_j.as_deref(), coupling.lambda.as_deref())?;
            commands::series(input, &c, order, settings)
        }
        Command::Verify {
            graph,
            trials,
            seed,
            tolerance,
            dump,
        } => {
            let input = commands::load_graph(&graph, None)?;
            let opts = VerifyOptions {
                trials,
                seed,
                tolerance,
                dump,
            };
            commands::verify(input, &opts, settings)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json_out = cli.json_out.clone();
    let result = run(cli).and_then(|out| {
        let text = serde_json::to_string_pretty(&out.json).expect("output serialises") + "\n";
        if let Some(path) = &json_out {
            commands::write_file(path, &text)?;
        }
        print!("{text}");
        Ok(out.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
