//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the observed numbers (run with `--nocapture` to see them on success).
//!
//! Benchmarks 1-3 assert the published accuracy targets verbatim. For a
//! polynomial trial space the targets of benchmarks 1 and 2 (and the error
//! target of 3) sit below the best-approximation floor of the non-polynomial
//! exact solutions, so those assertions document the gap rather than pass;
//! the remaining criteria are expected green. The basis for this is worked
//! through in the repository notes.

mod common;

use common::{
    monomial_to_basis_coeffs, oracle_frac_deriv, oracle_integer_deriv, ratio,
    rational_monomial_table, TestRng,
};
use ultrafde::basis::{gauss_jacobi, Basis};
use ultrafde::expr;
use ultrafde::fracdiff::frac_deriv_basis_at;
use ultrafde::problem::{built_in_example, convergence_csv};
use ultrafde::solver::{
    convergence_study, max_abs_error, solve_with_config, BoundaryCondition, BoundaryEnd,
    FdeProblem, NodeScheme, SolverConfig,
};
use ultrafde::special::CaputoOrder;

const LAMBDAS: [f64; 4] = [1.0, 0.5, 0.49, -0.49];

fn report(name: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("ACCEPTANCE {name}: PASS");
    } else {
        println!("ACCEPTANCE {name}: FAIL");
        for f in failures {
            println!("  {f}");
        }
    }
    assert!(failures.is_empty(), "{name}: {failures:#?}");
}

fn solve_example1(q: f64, q1: f64, lambda: f64, n: usize) -> f64 {
    let pf = built_in_example(1, Some(q), Some(q1)).unwrap();
    let config = SolverConfig::new(lambda, n);
    let sol = solve_with_config(&pf.problem, &config).unwrap();
    max_abs_error(&sol, pf.problem.exact_solution.as_ref().unwrap(), 1000).unwrap()
}

#[test]
fn acceptance_1_relaxation_benchmark_q_half() {
    // D^0.5 u + u = G, exact x^0.9: error <= 1e-13 at N=8, <= 1e-12 at N=16
    let mut failures = Vec::new();
    for &lambda in &LAMBDAS {
        for (n, tol) in [(8, 1e-13), (16, 1e-12)] {
            let err = solve_example1(0.5, 0.9, lambda, n);
            println!("  benchmark1 lambda={lambda} N={n}: max abs error {err:.4e} (target {tol:.0e})");
            if !(err <= tol) {
                failures.push(format!(
                    "lambda={lambda} N={n}: error {err:.4e} exceeds {tol:.0e}"
                ));
            }
        }
    }
    report("benchmark-1 (exact x^0.9, q=0.5)", &failures);
}

#[test]
fn acceptance_2_relaxation_benchmark_q_three_quarters() {
    // q = q1 = 0.75, exact x^0.75: same degree/tolerance pairs
    let mut failures = Vec::new();
    for &lambda in &LAMBDAS {
        for (n, tol) in [(8, 1e-13), (16, 1e-12)] {
            let err = solve_example1(0.75, 0.75, lambda, n);
            println!("  benchmark2 lambda={lambda} N={n}: max abs error {err:.4e} (target {tol:.0e})");
            if !(err <= tol) {
                failures.push(format!(
                    "lambda={lambda} N={n}: error {err:.4e} exceeds {tol:.0e}"
                ));
            }
        }
    }
    report("benchmark-2 (exact x^0.75, q=0.75)", &failures);
}

#[test]
fn acceptance_3_riccati_tanh() {
    // D u = 1 - u^2, exact tanh: Newton from zero in <= 10 iterations and
    // error <= 1e-13 at N=14, lambda=-0.49
    let mut failures = Vec::new();
    let pf = built_in_example(2, None, None).unwrap();
    let config = SolverConfig::new(-0.49, 14);
    let sol = solve_with_config(&pf.problem, &config).unwrap();
    let iters = sol.diagnostics.newton_iterations();
    let err = max_abs_error(&sol, pf.problem.exact_solution.as_ref().unwrap(), 1000).unwrap();
    println!("  riccati N=14 lambda=-0.49: error {err:.4e}, newton iterations {iters}");
    if iters > 10 {
        failures.push(format!("newton used {iters} iterations (> 10)"));
    }
    if !(err <= 1e-13) {
        failures.push(format!("error {err:.4e} exceeds 1e-13"));
    }
    report("riccati-tanh (q=1, N=14)", &failures);
}

#[test]
fn acceptance_4_fourth_order_log_bvp() {
    // nonlinear fourth-order problem on [-1, 1], exact ln(1.5 + 0.5x):
    // per-degree error ceilings and monotone decrease over N = 8..16.
    // Gauss collocation nodes reproduce the published table; equispaced
    // misses the N=14 ceiling by ~2x.
    let mut failures = Vec::new();
    let pf = built_in_example(3, None, None).unwrap();
    let exact = pf.problem.exact_solution.as_ref().unwrap();
    for &lambda in &LAMBDAS {
        let mut errors = std::collections::BTreeMap::new();
        for n in [8, 10, 12, 14, 16, 20] {
            let config = SolverConfig::new(lambda, n).with_scheme(NodeScheme::Gauss);
            match solve_with_config(&pf.problem, &config) {
                Ok(sol) => {
                    let err = max_abs_error(&sol, exact, 1000).unwrap();
                    errors.insert(n, err);
                }
                Err(e) => failures.push(format!("lambda={lambda} N={n}: solve failed: {e}")),
            }
        }
        println!(
            "  log-bvp lambda={lambda}: {}",
            errors
                .iter()
                .map(|(n, e)| format!("N{n}:{e:.3e}"))
                .collect::<Vec<_>>()
                .join(" ")
        );
        for (n, tol) in [(8, 1e-4), (14, 1e-9), (20, 1e-12)] {
            if let Some(&err) = errors.get(&n) {
                if !(err <= tol) {
                    failures.push(format!(
                        "lambda={lambda} N={n}: error {err:.4e} exceeds {tol:.0e}"
                    ));
                }
            }
        }
        let ladder: Vec<f64> = [8, 10, 12, 14, 16]
            .iter()
            .filter_map(|n| errors.get(n).copied())
            .collect();
        if ladder.len() == 5 {
            for w in ladder.windows(2) {
                if !(w[1] < w[0]) {
                    failures.push(format!(
                        "lambda={lambda}: error not decreasing ({} -> {})",
                        w[0], w[1]
                    ));
                }
            }
        }
    }
    report("fourth-order-log-bvp", &failures);
}

#[test]
fn acceptance_5_basis_property_suite() {
    let mut failures = Vec::new();
    for &lambda in &LAMBDAS {
        let n = 20;
        let basis = Basis::new(lambda, n, (0.0, 1.0)).unwrap();

        // orthogonality off-diagonals under a 30-node rule
        let rule = gauss_jacobi(lambda - 0.5, 30).unwrap();
        let mut worst_offdiag: f64 = 0.0;
        for j in 0..=n {
            for k in 0..j {
                let ip = rule.integrate(|x| {
                    let v = basis.eval_all(x);
                    v[j] * v[k]
                });
                worst_offdiag = worst_offdiag.max(ip.abs());
                if ip.abs() > 1e-10 {
                    failures.push(format!("lambda={lambda}: <C_{j}, C_{k}> = {ip:.3e}"));
                }
            }
        }

        // monic leading coefficients, exactly
        for (j, row) in basis.monomial_coeffs().iter().enumerate() {
            if row[j] != 1.0 {
                failures.push(format!("lambda={lambda}: c[{j}][{j}] = {}", row[j]));
            }
        }

        // closed-form squared norm vs quadrature
        let mut worst_norm: f64 = 0.0;
        for j in 0..=n {
            let quad = rule.integrate(|x| {
                let v = basis.eval_all(x);
                v[j] * v[j]
            });
            let closed = basis.squared_norm(j);
            let rel = ((quad - closed) / closed).abs();
            worst_norm = worst_norm.max(rel);
            if rel > 1e-11 {
                failures.push(format!(
                    "lambda={lambda} j={j}: norm mismatch rel {rel:.3e}"
                ));
            }
        }

        // symmetry C_j(1-x) = (-1)^j C_j(x)
        let mut worst_sym: f64 = 0.0;
        for s in 0..50 {
            let x = s as f64 / 49.0;
            let v = basis.eval_all(x);
            let m = basis.eval_all(1.0 - x);
            for j in 0..=n {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                let d = (m[j] - sign * v[j]).abs();
                worst_sym = worst_sym.max(d);
                if d > 1e-12 {
                    failures.push(format!("lambda={lambda} j={j} x={x}: symmetry off by {d:.3e}"));
                }
            }
        }
        println!(
            "  basis lambda={lambda}: worst off-diagonal {worst_offdiag:.3e}, norm rel {worst_norm:.3e}, symmetry {worst_sym:.3e}"
        );
    }
    report("basis-property-suite", &failures);
}

#[test]
fn acceptance_6_fractional_derivative_oracle() {
    let mut failures = Vec::new();
    let lambdas = [(ratio(-49, 100), -0.49), (ratio(1, 2), 0.5), (ratio(1, 1), 1.0)];
    let orders = [0.3, 0.5, 0.75, 1.5, 2.5];
    let mut rng = TestRng(0x5eed_0f_acc_e55u64);
    let mut worst_rel: f64 = 0.0;
    for (lam_rat, lam) in &lambdas {
        let table = rational_monomial_table(lam_rat, 12);
        let basis = Basis::new(*lam, 12, (0.0, 1.0)).unwrap();
        for &q in &orders {
            let order = CaputoOrder::new(q).unwrap();
            for _ in 0..20 {
                let x = (rng.uniform() * 0.999 + 0.001).min(1.0);
                let got = frac_deriv_basis_at(&basis, &order, x).unwrap();
                // low columns are structurally zero
                for j in 0..order.ceil() as usize {
                    if got[j] != 0.0 {
                        failures.push(format!(
                            "lambda={lam} q={q} j={j}: expected exact zero, got {}",
                            got[j]
                        ));
                    }
                }
                for j in order.ceil() as usize..=12 {
                    let want = oracle_frac_deriv(&table, j, q, x);
                    let diff = (got[j] - want).abs();
                    let tol = (1e-11 * want.abs()).max(1e-13);
                    if want.abs() > 1e-10 {
                        worst_rel = worst_rel.max(diff / want.abs());
                    }
                    if diff > tol {
                        failures.push(format!(
                            "lambda={lam} q={q} j={j} x={x}: {} vs oracle {want} (diff {diff:.3e})",
                            got[j]
                        ));
                    }
                }
            }
        }
        // integer orders against the classical derivative of the exact table
        for m in 1..=3usize {
            let order = CaputoOrder::new(m as f64).unwrap();
            for s in 1..=10 {
                let x = s as f64 / 10.0;
                let got = frac_deriv_basis_at(&basis, &order, x).unwrap();
                for j in 0..=12 {
                    let want = if j < m {
                        0.0
                    } else {
                        oracle_integer_deriv(&table, j, m, x)
                    };
                    if (got[j] - want).abs() > 1e-11 {
                        failures.push(format!(
                            "lambda={lam} m={m} j={j} x={x}: {} vs classical {want}",
                            got[j]
                        ));
                    }
                }
            }
        }
    }
    println!("  fractional-derivative oracle: worst relative deviation {worst_rel:.3e}");
    report("fractional-derivative-oracle", &failures);
}

#[test]
fn acceptance_7_manufactured_solutions() {
    let mut failures = Vec::new();
    let mut rng = TestRng(0xfeed_5eed_1234_9999u64);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let lambda = *rng.pick(&[-0.49, 0.5, 1.0]);
        let q = *rng.pick(&[0.5, 1.3, 2.0, 2.5]);
        let order = CaputoOrder::new(q).unwrap();
        let is_int = order.is_integer();
        let interval = if is_int {
            *rng.pick(&[(0.0, 1.0), (-1.0, 1.0)])
        } else {
            *rng.pick(&[(0.0, 1.0), (0.0, 2.0)])
        };
        let n = 6 + (rng.next_u64() % 7) as usize; // 6..=12
        let deg = n - (rng.next_u64() % 3) as usize;
        let target_mono: Vec<f64> = (0..=deg).map(|_| rng.uniform() * 2.0 - 1.0).collect();

        // optional lower-order term and zeroth coefficient
        let lower: Vec<(f64, &str)> = if rng.uniform() < 0.5 {
            let candidates: Vec<f64> = [0.25, 0.5, 1.0, 1.5, 2.0]
                .into_iter()
                .filter(|s| *s < q && (is_int || interval.0 == 0.0))
                .collect();
            if candidates.is_empty() {
                vec![]
            } else {
                let s = *rng.pick(&candidates);
                let s = if !is_int || (s - s.round()).abs() < 1e-12 {
                    s
                } else {
                    s.round().min(q - 1.0).max(0.0)
                };
                vec![(s, *rng.pick(&["1", "x", "sin(x)"]))]
            }
        } else {
            vec![]
        };
        let lower: Vec<(f64, &str)> = lower
            .into_iter()
            .filter(|(s, _)| {
                // fractional lower orders only make sense from origin 0
                ((s - s.round()).abs() < 1e-12 || interval.0 == 0.0) && *s < q
            })
            .collect();
        let g_text = *rng.pick(&[None, Some("1"), Some("x")]);

        match manufactured_problem(interval, q, &lower, g_text, &target_mono) {
            Ok(problem) => {
                let config = SolverConfig::new(lambda, n);
                match solve_with_config(&problem, &config) {
                    Ok(sol) => {
                        let table = ultrafde::basis::monomial_coefficients(lambda, n).unwrap();
                        let unit_mono =
                            common::compose_affine(&target_mono, interval.0, interval.1);
                        let want = monomial_to_basis_coeffs(&unit_mono, &table);
                        for j in 0..=n {
                            let diff = (sol.coefficients[j] - want[j]).abs();
                            worst = worst.max(diff);
                            if diff > 1e-8 {
                                failures.push(format!(
                                    "trial {trial} (lambda={lambda} q={q} N={n} interval={interval:?}): coefficient {j} off by {diff:.3e}"
                                ));
                            }
                        }
                    }
                    Err(e) => failures.push(format!("trial {trial}: solve failed: {e}")),
                }
            }
            Err(e) => failures.push(format!("trial {trial}: construction failed: {e}")),
        }
    }
    println!("  manufactured solutions: worst coefficient deviation {worst:.3e}");
    report("manufactured-solutions", &failures);
}

/// Build G := D^q u* + sum rho_i D^{s_i} u* + g u* as expression text from a
/// target polynomial, using the Stirling-gamma oracle for the ratios, and
/// wrap it in a well-posed problem whose exact solution is u*.
fn manufactured_problem(
    interval: (f64, f64),
    q: f64,
    lower: &[(f64, &str)],
    g_text: Option<&str>,
    mono: &[f64],
) -> Result<FdeProblem, String> {
    fn caputo_poly_text(mono: &[f64], q: f64) -> String {
        let ceil_q = q.ceil() as usize;
        let is_int = (q - q.round()).abs() < 1e-12;
        let mut terms = Vec::new();
        for (k, &c) in mono.iter().enumerate().skip(ceil_q) {
            let ratio = if is_int {
                (0..q.round() as usize).fold(1.0, |acc, i| acc * (k - i) as f64)
            } else {
                common::oracle_gamma_ratio(k as f64 + 1.0, k as f64 + 1.0 - q)
            };
            let coef = c * ratio;
            let power = k as f64 - q;
            if power == 0.0 {
                terms.push(format!("{coef}"));
            } else {
                terms.push(format!("{coef}*x^{power}"));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
    fn poly_text(mono: &[f64]) -> String {
        let terms: Vec<String> = mono
            .iter()
            .enumerate()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{k}"),
            })
            .collect();
        terms.join(" + ")
    }

    let mut rhs_parts = vec![format!("({})", caputo_poly_text(mono, q))];
    for (s, rho) in lower {
        rhs_parts.push(format!("({rho})*({})", caputo_poly_text(mono, *s)));
    }
    if let Some(g) = g_text {
        rhs_parts.push(format!("({g})*({})", poly_text(mono)));
    }
    let rhs = expr::parse(&rhs_parts.join(" + ")).map_err(|e| e.to_string())?;

    let order = CaputoOrder::new(q).map_err(|e| e.to_string())?;
    let ceil_q = order.ceil() as usize;
    // boundary values from the classical derivatives of the target
    let deriv_at = |k: usize, x: f64| -> f64 {
        mono.iter()
            .enumerate()
            .skip(k)
            .map(|(m, &c)| {
                let ff = (0..k).fold(1.0, |acc, i| acc * (m - i) as f64);
                c * ff * x.powi((m - k) as i32)
            })
            .sum()
    };
    let mut bcs = Vec::new();
    let plan: &[(BoundaryEnd, usize)] = match ceil_q {
        1 => &[(BoundaryEnd::Left, 0)],
        2 => &[(BoundaryEnd::Left, 0), (BoundaryEnd::Right, 0)],
        3 => &[
            (BoundaryEnd::Left, 0),
            (BoundaryEnd::Left, 1),
            (BoundaryEnd::Right, 0),
        ],
        _ => &[
            (BoundaryEnd::Left, 0),
            (BoundaryEnd::Left, 1),
            (BoundaryEnd::Right, 0),
            (BoundaryEnd::Right, 1),
        ],
    };
    for (end, k) in plan {
        let x = match end {
            BoundaryEnd::Left => interval.0,
            BoundaryEnd::Right => interval.1,
        };
        bcs.push(BoundaryCondition {
            end: *end,
            derivative_order: *k,
            value: deriv_at(*k, x),
        });
    }
    let lower_terms = lower
        .iter()
        .map(|(s, rho)| {
            Ok((
                CaputoOrder::new(*s).map_err(|e| e.to_string())?,
                expr::parse(rho).map_err(|e| e.to_string())?,
            ))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(FdeProblem {
        interval,
        leading_order: order,
        lower_terms,
        zeroth_coeff: match g_text {
            Some(g) => Some(expr::parse(g).map_err(|e| e.to_string())?),
            None => None,
        },
        nonlinear_term: None,
        rhs,
        boundary_conditions: bcs,
        exact_solution: None,
    })
}

#[test]
fn acceptance_8_convergence_csv_determinism() {
    let mut failures = Vec::new();
    let pf = built_in_example(3, None, None).unwrap();
    let make_csv = || {
        let mut rows = Vec::new();
        for n in [8, 10, 12, 14, 16, 20] {
            for &lambda in &LAMBDAS {
                rows.extend(convergence_study(
                    &pf.problem,
                    lambda,
                    &[n],
                    NodeScheme::Equispaced,
                ));
            }
        }
        convergence_csv(&rows)
    };
    let first = make_csv();
    let second = make_csv();
    if first != second {
        failures.push("two identical runs produced different CSV bytes".to_string());
    }
    if !first.starts_with("N,lambda,max_abs_error,residual,newton_iters,min_pivot\n") {
        failures.push("missing or wrong CSV header".to_string());
    }
    println!(
        "  determinism: {} rows, byte-identical = {}",
        first.lines().count() - 1,
        first == second
    );
    report("convergence-csv-determinism", &failures);
}
