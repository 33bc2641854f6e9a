//! Problem-file format, built-in benchmark problems, and CSV report
//! emission.
//!
//! A problem file is UTF-8 structured text with three sections. `#` starts a
//! comment. Keys repeat where that makes sense (`bc`, `term`).
//!
//! ```text
//! [problem]
//! interval = 0 1          # left and right endpoint
//! order    = 0.5          # leading Caputo order q
//! bc       = left 0 0     # end, derivative order k, value
//!
//! [terms]
//! term      = 0.3 sin(x)  # a rho_i(x) D^{s_i} u term: order, coefficient
//! g         = 1           # zeroth-order coefficient g(x)
//! nonlinear = u^2         # additive nonlinear term N(x, u)
//! rhs       = 1 + x       # right-hand side G(x)
//! exact     = tanh(x)     # optional exact solution for error reporting
//!
//! [discretization]
//! lambda = -0.49
//! n      = 8 16 24        # one or more degrees
//! nodes  = equispaced     # or gauss
//! ```
//!
//! The built-in problems are defined through this same parser from embedded
//! text, so the file format and the built-ins cannot diverge.

use crate::basis::Basis;
use crate::expr::{self, ExprNode};
use crate::solver::{
    BoundaryCondition, BoundaryEnd, ConvergenceRow, FdeProblem, NodeScheme, SolverError,
    SpectralSolution,
};
use crate::special::CaputoOrder;
use thiserror::Error;

/// A located problem-file diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ProblemFileError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ProblemFileError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ProblemFileError {
            line,
            column,
            message: message.into(),
        }
    }
}

/// The `[discretization]` section; fields are optional so command-line flags
/// can fill them in.
#[derive(Debug, Clone, Default)]
pub struct Discretization {
    pub lambda: Option<f64>,
    pub degrees: Vec<usize>,
    pub scheme: Option<NodeScheme>,
}

/// A parsed problem file: the problem itself plus discretization defaults.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub problem: FdeProblem,
    pub discretization: Discretization,
}

#[derive(Default)]
struct Builder {
    interval: Option<(f64, f64)>,
    order: Option<CaputoOrder>,
    bcs: Vec<BoundaryCondition>,
    terms: Vec<(CaputoOrder, ExprNode)>,
    zeroth: Option<ExprNode>,
    nonlinear: Option<ExprNode>,
    rhs: Option<ExprNode>,
    exact: Option<ExprNode>,
    disc: Discretization,
    problem_line: usize,
}

fn parse_expr_value(
    value: &str,
    line: usize,
    value_column: usize,
) -> Result<ExprNode, ProblemFileError> {
    expr::parse(value).map_err(|e| {
        let offset = match &e {
            expr::ParseError::UnknownIdentifier { offset, .. }
            | expr::ParseError::UnbalancedParen { offset }
            | expr::ParseError::WrongArity { offset, .. }
            | expr::ParseError::UnexpectedChar { offset, .. }
            | expr::ParseError::MalformedNumber { offset }
            | expr::ParseError::UnexpectedEnd { offset }
            | expr::ParseError::UnexpectedToken { offset } => *offset,
        };
        ProblemFileError::new(line, value_column + offset - 1, e.to_string())
    })
}

fn parse_f64(value: &str, line: usize, column: usize, what: &str) -> Result<f64, ProblemFileError> {
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| ProblemFileError::new(line, column, format!("invalid {what}: `{value}`")))
}

/// Parse a problem file into a validated problem plus discretization.
pub fn parse_problem_file(text: &str) -> Result<ProblemFile, ProblemFileError> {
    #[derive(PartialEq, Clone, Copy)]
    enum Section {
        None,
        Problem,
        Terms,
        Discretization,
    }
    let mut section = Section::None;
    let mut b = Builder::default();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('[') {
            section = match trimmed {
                "[problem]" => {
                    b.problem_line = line_no;
                    Section::Problem
                }
                "[terms]" => Section::Terms,
                "[discretization]" => Section::Discretization,
                other => {
                    return Err(ProblemFileError::new(
                        line_no,
                        1,
                        format!("unknown section {other}"),
                    ))
                }
            };
            continue;
        }
        let Some((key_part, value_part)) = line.split_once('=') else {
            return Err(ProblemFileError::new(
                line_no,
                1,
                format!("expected `key = value`, got `{trimmed}`"),
            ));
        };
        let key = key_part.trim();
        let value = value_part.trim();
        let value_column = key_part.len() + 2 + (value_part.len() - value_part.trim_start().len());
        if value.is_empty() {
            return Err(ProblemFileError::new(
                line_no,
                value_column,
                format!("missing value for `{key}`"),
            ));
        }

        match (section, key) {
            (Section::Problem, "interval") => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(ProblemFileError::new(
                        line_no,
                        value_column,
                        "interval needs two endpoints, e.g. `interval = 0 1`",
                    ));
                }
                let a = parse_f64(parts[0], line_no, value_column, "interval endpoint")?;
                let bb = parse_f64(parts[1], line_no, value_column, "interval endpoint")?;
                b.interval = Some((a, bb));
            }
            (Section::Problem, "order") => {
                let q = parse_f64(value, line_no, value_column, "order")?;
                let order = CaputoOrder::new(q).map_err(|e| {
                    ProblemFileError::new(line_no, value_column, format!("order: {e}"))
                })?;
                if order.value() <= 0.0 {
                    return Err(ProblemFileError::new(
                        line_no,
                        value_column,
                        format!("order must be positive, got {q}"),
                    ));
                }
                b.order = Some(order);
            }
            (Section::Problem, "bc") => {
                let parts: Vec<&str> = value.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(ProblemFileError::new(
                        line_no,
                        value_column,
                        "bc needs `end k value`, e.g. `bc = left 0 0`",
                    ));
                }
                let end = match parts[0] {
                    "left" => BoundaryEnd::Left,
                    "right" => BoundaryEnd::Right,
                    other => {
                        return Err(ProblemFileError::new(
                            line_no,
                            value_column,
                            format!("bc end must be `left` or `right`, got `{other}`"),
                        ))
                    }
                };
                let k: usize = parts[1].parse().map_err(|_| {
                    ProblemFileError::new(
                        line_no,
                        value_column,
                        format!("invalid bc derivative order `{}`", parts[1]),
                    )
                })?;
                let v = parse_f64(parts[2], line_no, value_column, "bc value")?;
                b.bcs.push(BoundaryCondition {
                    end,
                    derivative_order: k,
                    value: v,
                });
            }
            (Section::Terms, "term") => {
                let Some((order_part, expr_part)) = value.split_once(char::is_whitespace) else {
                    return Err(ProblemFileError::new(
                        line_no,
                        value_column,
                        "term needs `order coefficient-expression`",
                    ));
                };
                let s = parse_f64(order_part, line_no, value_column, "term order")?;
                let order = CaputoOrder::new(s).map_err(|e| {
                    ProblemFileError::new(line_no, value_column, format!("term order: {e}"))
                })?;
                let expr_col = value_column + order_part.len() + 1;
                let coeff = parse_expr_value(expr_part.trim(), line_no, expr_col)?;
                b.terms.push((order, coeff));
            }
            (Section::Terms, "g") => {
                b.zeroth = Some(parse_expr_value(value, line_no, value_column)?);
            }
            (Section::Terms, "nonlinear") => {
                b.nonlinear = Some(parse_expr_value(value, line_no, value_column)?);
            }
            (Section::Terms, "rhs") => {
                b.rhs = Some(parse_expr_value(value, line_no, value_column)?);
            }
            (Section::Terms, "exact") => {
                b.exact = Some(parse_expr_value(value, line_no, value_column)?);
            }
            (Section::Discretization, "lambda") => {
                b.disc.lambda = Some(parse_f64(value, line_no, value_column, "lambda")?);
            }
            (Section::Discretization, "n") => {
                let mut degrees = Vec::new();
                for piece in value.split(|c: char| c == ',' || c.is_whitespace()) {
                    if piece.is_empty() {
                        continue;
                    }
                    let n: usize = piece.parse().map_err(|_| {
                        ProblemFileError::new(
                            line_no,
                            value_column,
                            format!("invalid degree `{piece}`"),
                        )
                    })?;
                    degrees.push(n);
                }
                b.disc.degrees = degrees;
            }
            (Section::Discretization, "nodes") => {
                b.disc.scheme = Some(match value {
                    "equispaced" => NodeScheme::Equispaced,
                    "gauss" => NodeScheme::Gauss,
                    other => {
                        return Err(ProblemFileError::new(
                            line_no,
                            value_column,
                            format!("nodes must be `equispaced` or `gauss`, got `{other}`"),
                        ))
                    }
                });
            }
            (Section::None, _) => {
                return Err(ProblemFileError::new(
                    line_no,
                    1,
                    format!("`{key}` appears before any section header"),
                ));
            }
            (_, other) => {
                return Err(ProblemFileError::new(
                    line_no,
                    1,
                    format!("unknown key `{other}` in this section"),
                ));
            }
        }
    }

    let problem_line = b.problem_line.max(1);
    let interval = b.interval.ok_or_else(|| {
        ProblemFileError::new(problem_line, 1, "missing `interval` in [problem]")
    })?;
    let order = b
        .order
        .ok_or_else(|| ProblemFileError::new(problem_line, 1, "missing `order` in [problem]"))?;
    let rhs = b
        .rhs
        .ok_or_else(|| ProblemFileError::new(problem_line, 1, "missing `rhs` in [terms]"))?;
    let problem = FdeProblem {
        interval,
        leading_order: order,
        lower_terms: b.terms,
        zeroth_coeff: b.zeroth,
        nonlinear_term: b.nonlinear,
        rhs,
        boundary_conditions: b.bcs,
        exact_solution: b.exact,
    };
    problem
        .validate()
        .map_err(|e| ProblemFileError::new(problem_line, 1, e.to_string()))?;
    Ok(ProblemFile {
        problem,
        discretization: b.disc,
    })
}

// --- built-in problems -------------------------------------------------------

/// Problem-file text of the fractional relaxation benchmark
/// `D^q u + u = Gamma(q1+1)/Gamma(q1-q+1) x^(q1-q) + x^q1`, `u(0) = 0`,
/// whose exact solution is `x^q1`. The right-hand side is generated from
/// `(q, q1)` so any parameter pair produces a consistent problem.
pub fn example1_text(q: f64, q1: f64) -> String {
    format!(
        "# Fractional relaxation benchmark: D^q u + u = G(x) on [0, 1]\n\
         # with G built so that the exact solution is u(x) = x^q1.\n\
         \n\
         [problem]\n\
         interval = 0 1\n\
         order = {q}\n\
         bc = left 0 0\n\
         \n\
         [terms]\n\
         g = 1\n\
         rhs = gamma({q1} + 1)/gamma({q1} - {q} + 1) * x^({q1} - {q}) + x^{q1}\n\
         exact = x^{q1}\n\
         \n\
         [discretization]\n\
         lambda = -0.49\n\
         n = 16\n\
         nodes = equispaced\n"
    )
}

/// Problem-file text of the Riccati initial value problem
/// `D u = 1 - u^2`, `u(0) = 0`, exact solution `tanh(x)`.
pub const EXAMPLE2_TEXT: &str = include_str!("../../../problems/example2.fde");

/// Problem-file text of the nonlinear fourth-order two-point problem
/// `u'''' - (3/8) e^(-4u) = -(3/4)(1.5 + 0.5x)^-4` on `[-1, 1]`,
/// exact solution `ln(1.5 + 0.5x)`.
pub const EXAMPLE3_TEXT: &str = include_str!("../../../problems/example3.fde");

pub const EXAMPLE1_DEFAULT_Q: f64 = 0.5;
pub const EXAMPLE1_DEFAULT_Q1: f64 = 0.9;

/// The built-in problems, parsed through the problem-file parser.
/// `q`/`q1` apply to example 1 only.
pub fn built_in_example(
    id: u32,
    q: Option<f64>,
    q1: Option<f64>,
) -> Result<ProblemFile, ProblemFileError> {
    match id {
        1 => parse_problem_file(&example1_text(
            q.unwrap_or(EXAMPLE1_DEFAULT_Q),
            q1.unwrap_or(EXAMPLE1_DEFAULT_Q1),
        )),
        2 | 3 => {
            if q.is_some() || q1.is_some() {
                return Err(ProblemFileError::new(
                    1,
                    1,
                    "the q and q1 parameters apply to example 1 only",
                ));
            }
            parse_problem_file(if id == 2 { EXAMPLE2_TEXT } else { EXAMPLE3_TEXT })
        }
        other => Err(ProblemFileError::new(
            1,
            1,
            format!("no built-in example {other}; choose 1, 2 or 3"),
        )),
    }
}

// --- CSV reports --------------------------------------------------------------

fn csv_quote(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Convergence table as CSV. Failed rows carry an `error` marker and the
/// failure message, and do not abort the table.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("N,lambda,max_abs_error,residual,newton_iters,min_pivot\n");
    for r in rows {
        match &r.failure {
            None => {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.n,
                    r.lambda,
                    r.max_abs_error.unwrap_or(f64::NAN),
                    r.residual.unwrap_or(f64::NAN),
                    r.newton_iters,
                    r.min_pivot.unwrap_or(f64::NAN),
                ));
            }
            Some(msg) => {
                out.push_str(&format!(
                    "{},{},error,error,error,{}\n",
                    r.n,
                    r.lambda,
                    csv_quote(msg)
                ));
            }
        }
    }
    out
}

/// Sampled solution values as CSV: `n_samples + 1` uniform points including
/// the endpoints. With an exact solution the absolute error column is
/// appended, which is the data behind error-profile plots.
pub fn samples_csv(
    sol: &SpectralSolution,
    exact: Option<&ExprNode>,
    n_samples: usize,
) -> Result<String, SolverError> {
    let (a, b) = sol.basis.interval();
    let n = n_samples.max(1);
    let mut out = String::from(match exact {
        Some(_) => "x,u,exact,abs_error\n",
        None => "x,u\n",
    });
    for i in 0..=n {
        let x = a + (b - a) * (i as f64 / n as f64);
        let u = sol.evaluate_at(x)?;
        match exact {
            Some(ex) => {
                let v = ex.eval_in_x(x)?;
                out.push_str(&format!("{x},{u},{v},{}\n", (u - v).abs()));
            }
            None => out.push_str(&format!("{x},{u}\n")),
        }
    }
    Ok(out)
}

/// Monomial coefficients and squared norms of a basis as CSV, one row per
/// degree: `j,squared_norm,c0..cN` with empty cells past the diagonal.
pub fn basis_table_csv(lambda: f64, n: usize) -> Result<String, SolverError> {
    if n > 30 {
        return Err(SolverError::IllPosed(format!(
            "basis tables are limited to N <= 30, got {n}"
        )));
    }
    let basis = Basis::new(lambda, n, (0.0, 1.0))?;
    let mut out = String::from("j,squared_norm");
    for k in 0..=n {
        out.push_str(&format!(",c{k}"));
    }
    out.push('\n');
    for j in 0..=n {
        out.push_str(&format!("{j},{}", basis.squared_norm(j)));
        let row = &basis.monomial_coeffs()[j];
        for k in 0..=n {
            out.push(',');
            if k <= j {
                out.push_str(&format!("{}", row[k]));
            }
        }
        out.push('\n');
    }
    Ok(out)
}
