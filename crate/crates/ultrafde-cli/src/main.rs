//! Command-line front end: built-in benchmark problems, file-defined
//! problems, convergence tables and CSV emission.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 solver failure,
//! 4 I/O error.

use clap::{Args, Parser, Subcommand};
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use ultrafde::problem::{
    basis_table_csv, built_in_example, convergence_csv, parse_problem_file, samples_csv,
    Discretization, ProblemFile,
};
use ultrafde::solver::{
    self, convergence_study, max_abs_error, NodeScheme, SolverConfig, SolverError,
    SpectralSolution,
};

#[derive(Parser)]
#[command(
    name = "ultrafde",
    about = "Spectral collocation solver for multi-order fractional differential equations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum NodeArg {
    Equispaced,
    Gauss,
}

impl From<NodeArg> for NodeScheme {
    fn from(n: NodeArg) -> NodeScheme {
        match n {
            NodeArg::Equispaced => NodeScheme::Equispaced,
            NodeArg::Gauss => NodeScheme::Gauss,
        }
    }
}

#[derive(Args)]
struct SolveFlags {
    /// Basis parameter lambda (> -1/2, != 0)
    #[arg(long)]
    lambda: Option<f64>,
    /// Truncation degree
    #[arg(long = "N")]
    n: Option<usize>,
    /// Collocation node placement
    #[arg(long, value_enum)]
    nodes: Option<NodeArg>,
    /// Newton residual tolerance (default 1e-13 (1 + ||rhs||))
    #[arg(long)]
    tol: Option<f64>,
    /// Emit k+1 sampled (x, u) pairs as CSV
    #[arg(long)]
    samples: Option<usize>,
    /// Write output here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a built-in benchmark problem (1, 2 or 3)
    Example {
        /// Built-in problem id
        id: u32,
        /// Leading Caputo order q (example 1 only)
        #[arg(long)]
        q: Option<f64>,
        /// Exact-solution exponent q1 (example 1 only)
        #[arg(long)]
        q1: Option<f64>,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Solve a problem defined in a file
    Solve {
        /// Problem file path
        file: PathBuf,
        #[command(flatten)]
        flags: SolveFlags,
    },
    /// Error-vs-degree table for a problem with a known exact solution
    Convergence {
        /// Built-in problem id
        #[arg(long, conflicts_with = "file")]
        example: Option<u32>,
        /// Problem file path
        #[arg(long)]
        file: Option<PathBuf>,
        /// Comma-separated lambda values
        #[arg(long = "lambda", value_delimiter = ',')]
        lambdas: Vec<f64>,
        /// Comma-separated degrees
        #[arg(long = "N", value_delimiter = ',')]
        ns: Vec<usize>,
        /// Collocation node placement
        #[arg(long, value_enum)]
        nodes: Option<NodeArg>,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monomial coefficients and squared norms of a basis, as CSV
    BasisTable {
        #[arg(long)]
        lambda: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Input(String),
    Solver(String),
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Solver(m) => write!(f, "solver error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> CliError {
        use ultrafde::basis::BasisError;
        use ultrafde::special::SpecialError;
        // parameter problems are input errors; numerical breakdowns are
        // solver failures
        let is_input = matches!(
            e,
            SolverError::IllPosed(_)
                | SolverError::Unsupported(_)
                | SolverError::Basis(
                    BasisError::InvalidLambda(_)
                        | BasisError::InvalidInterval(..)
                        | BasisError::InvalidAlpha(_)
                        | BasisError::EmptyRule
                )
                | SolverError::Special(
                    SpecialError::InvalidOrder(_) | SpecialError::InvalidExponent(_)
                )
        );
        if is_input {
            CliError::Input(e.to_string())
        } else {
            CliError::Solver(e.to_string())
        }
    }
}

fn write_out(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            std::io::stdout()
                .flush()
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

fn resolve_config(
    disc: &Discretization,
    flags: &SolveFlags,
) -> Result<SolverConfig, CliError> {
    let lambda = flags
        .lambda
        .or(disc.lambda)
        .ok_or_else(|| CliError::Input("no lambda given (flag --lambda or [discretization])".into()))?;
    let n = flags
        .n
        .or_else(|| disc.degrees.first().copied())
        .ok_or_else(|| CliError::Input("no degree given (flag --N or [discretization])".into()))?;
    let mut config = SolverConfig::new(lambda, n);
    config.scheme = flags
        .nodes
        .map(NodeScheme::from)
        .or(disc.scheme)
        .unwrap_or(NodeScheme::Equispaced);
    config.newton_tol = flags.tol;
    Ok(config)
}

fn report_solution(
    pf: &ProblemFile,
    sol: &SpectralSolution,
    config: &SolverConfig,
) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str(&format!(
        "lambda = {}, N = {}, nodes = {}\n",
        config.lambda,
        config.degree,
        match config.scheme {
            NodeScheme::Equispaced => "equispaced",
            NodeScheme::Gauss => "gauss",
        }
    ));
    out.push_str(&format!("residual norm = {:e}\n", sol.residual_norm));
    out.push_str(&format!(
        "newton iterations = {}\n",
        sol.diagnostics.newton_iterations()
    ));
    if let Some(exact) = &pf.problem.exact_solution {
        let err = max_abs_error(sol, exact, 1000).map_err(CliError::from)?;
        out.push_str(&format!("max abs error = {err:e}\n"));
    }
    Ok(out)
}

fn run_solve(pf: &ProblemFile, flags: &SolveFlags) -> Result<(), CliError> {
    let config = resolve_config(&pf.discretization, flags)?;
    let sol = solver::solve_with_config(&pf.problem, &config)?;
    if sol.diagnostics.ill_conditioned {
        eprintln!(
            "warning: collocation system is ill-conditioned (smallest pivot {:.3e} vs norm {:.3e}); expect accuracy loss",
            sol.diagnostics.min_pivot, sol.diagnostics.matrix_inf_norm
        );
    }
    match flags.samples {
        Some(k) => {
            let csv = samples_csv(&sol, pf.problem.exact_solution.as_ref(), k)?;
            write_out(&flags.output, &csv)
        }
        None => {
            let report = report_solution(pf, &sol, &config)?;
            write_out(&flags.output, &report)
        }
    }
}

fn load_file(path: &PathBuf) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_problem_file(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Example { id, q, q1, flags } => {
            let pf = built_in_example(id, q, q1).map_err(|e| CliError::Input(e.to_string()))?;
            run_solve(&pf, &flags)
        }
        Command::Solve { file, flags } => {
            let pf = load_file(&file)?;
            run_solve(&pf, &flags)
        }
        Command::Convergence {
            example,
            file,
            lambdas,
            ns,
            nodes,
            output,
        } => {
            let pf = match (example, file) {
                (Some(id), None) => {
                    built_in_example(id, None, None).map_err(|e| CliError::Input(e.to_string()))?
                }
                (None, Some(path)) => load_file(&path)?,
                _ => {
                    return Err(CliError::Input(
                        "give exactly one of --example or --file".into(),
                    ))
                }
            };
            if pf.problem.exact_solution.is_none() {
                return Err(CliError::Input(
                    "convergence tables need an exact solution in the problem".into(),
                ));
            }
            let lambdas = if lambdas.is_empty() {
                vec![pf
                    .discretization
                    .lambda
                    .ok_or_else(|| CliError::Input("no lambda given".into()))?]
            } else {
                lambdas
            };
            let ns = if ns.is_empty() {
                pf.discretization.degrees.clone()
            } else {
                ns
            };
            let scheme = nodes
                .map(NodeScheme::from)
                .or(pf.discretization.scheme)
                .unwrap_or(NodeScheme::Equispaced);
            let mut rows = Vec::new();
            for &n in &ns {
                for &lambda in &lambdas {
                    rows.extend(convergence_study(&pf.problem, lambda, &[n], scheme));
                }
            }
            write_out(&output, &convergence_csv(&rows))
        }
        Command::BasisTable { lambda, n, output } => {
            let csv = basis_table_csv(lambda, n).map_err(CliError::from)?;
            write_out(&output, &csv)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
