use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pertexp_cli::commands::{self, ExpandArgs, SolveMode, SylvesterArgs, ValidateArgs};
use pertexp_cli::matrix_io::InputFormat;
use pertexp_cli::{exit, CliError, CliResult};

/// Eigenvalue and eigenvector perturbation expansions of A(ε) = A0 + ε·A1.
///
/// Exit status: 0 success, 2 parse/shape/usage error, 3 not semi-simple or
/// singular operator, 4 higher-order degeneracy unresolved, 5 validation
/// slopes fail, 6 eigenvalue matching failed (shrink ε).
#[derive(Parser)]
#[command(name = "pertexp", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Absolute tolerance for grouping eigenvalues of A0 into clusters.
    #[arg(long, global = true)]
    cluster_tol: Option<f64>,
    /// Absolute tolerance below which λᵢ+γⱼ counts as zero.
    #[arg(long, global = true)]
    zero_tol: Option<f64>,
    /// Input format; inferred from the file extension when absent.
    #[arg(long, global = true, value_enum)]
    format: Option<InputFormat>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Λ0..ΛK and V0..VK (plus W1).
    Expand {
        #[arg(long)]
        a0: PathBuf,
        #[arg(long)]
        a1: PathBuf,
        #[arg(long)]
        order: usize,
        /// Report path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve AX + XB = Q exactly or in the minimum-norm sense.
    Sylvester {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long, value_enum, default_value = "solve")]
        mode: SolveMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the expansion with exact eigenpairs over a log-spaced ε grid.
    Validate {
        #[arg(long)]
        a0: PathBuf,
        #[arg(long)]
        a1: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps_min: f64,
        #[arg(long, default_value_t = 1e-1)]
        eps_max: f64,
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Error curves (eps,lambda_error,vector_error). Defaults to the
        /// report path with a .csv extension.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<i32> {
    let g = cli.global;
    match cli.command {
        Command::Expand { a0, a1, order, out } => {
            let json = commands::expand(&ExpandArgs {
                a0,
                a1,
                order,
                cluster_tol: g.cluster_tol,
                format: g.format,
            })?;
            commands::emit(out.as_deref(), &json)?;
            Ok(exit::OK)
        }
        Command::Sylvester { a, b, q, mode, out } => {
            let json = commands::sylvester(&SylvesterArgs {
                a,
                b,
                q,
                mode,
                zero_tol: g.zero_tol,
                format: g.format,
            })?;
            commands::emit(out.as_deref(), &json)?;
            Ok(exit::OK)
        }
        Command::Validate {
            a0,
            a1,
            order,
            eps_min,
            eps_max,
            points,
            out,
            csv,
        } => {
            let result = commands::validate(&ValidateArgs {
                a0,
                a1,
                order,
                eps_min,
                eps_max,
                points,
                cluster_tol: g.cluster_tol,
                format: g.format,
            })?;
            commands::emit(out.as_deref(), &result.json)?;
            let csv = csv.or_else(|| out.map(|p| p.with_extension("csv")));
            if let Some(path) = csv {
                commands::emit(Some(&path), &result.csv)?;
            }
            if !result.pass {
                eprintln!("pertexp: remainder slopes below order + 0.9");
            }
            Ok(commands::validation_status(result.pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { exit::USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(CliError { code, message }) => {
            eprintln!("pertexp: {message}");
            ExitCode::from(code as u8)
        }
    }
}
