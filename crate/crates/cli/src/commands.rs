use std::path::{Path, PathBuf};

use clap::ValueEnum;
use pertexp::{oracle, PerturbationProblem, SolveReport, SylvesterOperator};

use crate::matrix_io::{read_matrix, InputFormat};
use crate::report::{to_json, validation_csv, ExpansionReport, SylvesterReport, ValidationFile};
use crate::{exit, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMode {
    Solve,
    Pseudo,
}

impl SolveMode {
    fn name(self) -> &'static str {
        match self {
            SolveMode::Solve => "solve",
            SolveMode::Pseudo => "pseudo",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExpandArgs {
    pub a0: PathBuf,
    pub a1: PathBuf,
    pub order: usize,
    pub cluster_tol: Option<f64>,
    pub format: Option<InputFormat>,
}

#[derive(Debug, Clone)]
pub struct SylvesterArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub q: PathBuf,
    pub mode: SolveMode,
    pub zero_tol: Option<f64>,
    pub format: Option<InputFormat>,
}

#[derive(Debug, Clone)]
pub struct ValidateArgs {
    pub a0: PathBuf,
    pub a1: PathBuf,
    pub order: usize,
    pub eps_min: f64,
    pub eps_max: f64,
    pub points: usize,
    pub cluster_tol: Option<f64>,
    pub format: Option<InputFormat>,
}

fn load_problem(
    a0: &Path,
    a1: &Path,
    order: usize,
    cluster_tol: Option<f64>,
    format: Option<InputFormat>,
) -> CliResult<PerturbationProblem> {
    if order < 1 {
        return Err(CliError::usage("--order must be at least 1"));
    }
    if let Some(tol) = cluster_tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::usage(format!(
                "--cluster-tol must be a finite non-negative number, got {tol}"
            )));
        }
    }
    let a0 = read_matrix(a0, format)?;
    let a1 = read_matrix(a1, format)?;
    let mut problem = PerturbationProblem::new(a0, a1, order)?;
    problem.cluster_tol = cluster_tol;
    Ok(problem)
}

/// Returns the report JSON.
pub fn expand(args: &ExpandArgs) -> CliResult<String> {
    let problem = load_problem(
        &args.a0,
        &args.a1,
        args.order,
        args.cluster_tol,
        args.format,
    )?;
    let terms = pertexp::expand(&problem)?;
    Ok(to_json(&ExpansionReport::from_terms(&terms)))
}

/// Returns the report JSON.
pub fn sylvester(args: &SylvesterArgs) -> CliResult<String> {
    if let Some(tol) = args.zero_tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::usage(format!(
                "--zero-tol must be a finite non-negative number, got {tol}"
            )));
        }
    }
    let a = read_matrix(&args.a, args.format)?;
    let b = read_matrix(&args.b, args.format)?;
    let q = read_matrix(&args.q, args.format)?;
    let op = SylvesterOperator::new(&a, &b, args.zero_tol)?;
    let report = match args.mode {
        SolveMode::Pseudo => op.pseudo_solve(&q)?,
        SolveMode::Solve => {
            let x = op.solve(&q)?;
            let residual = (op.apply(&x)? - &q).norm() / q.norm().max(1.0);
            SolveReport {
                x,
                residual,
                solvable: true,
                violated_positions: Vec::new(),
                cond: op.cond(),
            }
        }
    };
    Ok(to_json(&SylvesterReport::from_solve(
        args.mode.name(),
        &report,
    )))
}

pub struct ValidationOutput {
    pub json: String,
    pub csv: String,
    pub pass: bool,
}

pub fn validate(args: &ValidateArgs) -> CliResult<ValidationOutput> {
    if !(args.eps_min > 0.0 && args.eps_min < args.eps_max && args.eps_max.is_finite()) {
        return Err(CliError::usage(format!(
            "need 0 < eps-min < eps-max, got {} and {}",
            args.eps_min, args.eps_max
        )));
    }
    if args.points < 4 {
        return Err(CliError::usage(format!(
            "--points must be at least 4, got {}",
            args.points
        )));
    }
    let problem = load_problem(
        &args.a0,
        &args.a1,
        args.order,
        args.cluster_tol,
        args.format,
    )?;
    let terms = pertexp::expand(&problem)?;
    let grid = oracle::log_grid(args.eps_min, args.eps_max, args.points)?;
    let report = oracle::taylor_remainder_slopes(&problem, &terms, &grid)?;
    Ok(ValidationOutput {
        json: to_json(&ValidationFile::from(&report)),
        csv: validation_csv(&report),
        pass: report.pass,
    })
}

/// Exit status for a validation run that completed.
pub fn validation_status(pass: bool) -> i32 {
    if pass {
        exit::OK
    } else {
        exit::SLOPES_FAILED
    }
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| {
            CliError::new(exit::INTERNAL, format!("cannot write {}: {e}", p.display()))
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
