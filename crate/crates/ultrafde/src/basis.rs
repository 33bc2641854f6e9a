//! Shifted monic ultraspherical polynomials on `[0, 1]`.
//!
//! The family `C_j` (monic, degree j) is orthogonal under the weight
//! `w(x) = (x - x^2)^(lambda - 1/2)` for `lambda > -1/2`, `lambda != 0`.
//! Construction and evaluation go through the monic three-term recurrence
//!
//! ```text
//! C_{j+1}(x) = (x - 1/2) C_j(x) - b_j C_{j-1}(x),
//! b_j = j (j + 2 lambda - 1) / (16 (j + lambda)(j + lambda - 1)),
//! ```
//!
//! with `C_0 = 1` and `C_1 = x - 1/2`. The same recurrence run on coefficient
//! vectors yields the monomial table used for fractional differentiation.
//! Evaluation always uses the recurrence: the monomial form has alternating
//! signs and loses accuracy past degree ~20.

use crate::special::{self, SpecialError};
use crate::tolerances::{PIVOT_MIN, PROJECTION_EXTRA_NODES, QUAD_NEWTON_MAX_ITER};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("lambda must be finite, > -1/2 and != 0, got {0}")]
    InvalidLambda(f64),
    #[error("interval must satisfy A < B with finite endpoints, got [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("point {point} lies outside the interval [{a}, {b}]")]
    OutOfInterval { point: f64, a: f64, b: f64 },
    #[error("quadrature weight exponent must be > -1 and != -1/2, got {0}")]
    InvalidAlpha(f64),
    #[error("quadrature rule needs at least one node")]
    EmptyRule,
    #[error("quadrature node {index} did not converge within {QUAD_NEWTON_MAX_ITER} iterations")]
    NodeNewtonFailed { index: usize },
    #[error(transparent)]
    Special(#[from] SpecialError),
}

fn check_lambda(lambda: f64) -> Result<(), BasisError> {
    if !lambda.is_finite() || lambda <= -0.5 || lambda == 0.0 {
        return Err(BasisError::InvalidLambda(lambda));
    }
    Ok(())
}

/// Monic recurrence coefficients `(a_j, b_j)` of the shifted family, `j >= 1`.
///
/// The center is `a_j = 1/2` for every j because the weight is symmetric
/// about `x = 1/2`.
pub fn recurrence_coefficients(lambda: f64, j: usize) -> Result<(f64, f64), BasisError> {
    check_lambda(lambda)?;
    let jf = j as f64;
    let b = jf * (jf + 2.0 * lambda - 1.0) / (16.0 * (jf + lambda) * (jf + lambda - 1.0));
    Ok((0.5, b))
}

/// Monomial coefficient table `c[j][k]` with `C_j(x) = sum_k c[j][k] x^k`,
/// built by running the recurrence on coefficient vectors. The leading
/// coefficient `c[j][j]` is exactly 1.
pub fn monomial_coefficients(lambda: f64, n: usize) -> Result<Vec<Vec<f64>>, BasisError> {
    check_lambda(lambda)?;
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    table.push(vec![1.0]);
    if n >= 1 {
        table.push(vec![-0.5, 1.0]);
    }
    for j in 1..n {
        let (_, b) = recurrence_coefficients(lambda, j)?;
        let cur = &table[j];
        let prev = &table[j - 1];
        let mut next = vec![0.0; j + 2];
        for (k, &c) in cur.iter().enumerate() {
            next[k + 1] += c; // x * C_j
            next[k] -= 0.5 * c; // -1/2 * C_j
        }
        for (k, &c) in prev.iter().enumerate() {
            next[k] -= b * c;
        }
        table.push(next);
    }
    Ok(table)
}

/// Affine map from `[A, B]` onto the unit interval.
pub fn map_to_unit(interval: (f64, f64), xi: f64) -> Result<f64, BasisError> {
    let (a, b) = interval;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(BasisError::InvalidInterval(a, b));
    }
    let slack = 4.0 * f64::EPSILON * (b - a).max(a.abs()).max(b.abs());
    if xi < a - slack || xi > b + slack {
        return Err(BasisError::OutOfInterval { point: xi, a, b });
    }
    Ok(((xi - a) / (b - a)).clamp(0.0, 1.0))
}

/// Inverse of [`map_to_unit`].
pub fn map_from_unit(interval: (f64, f64), t: f64) -> f64 {
    let (a, b) = interval;
    a + (b - a) * t
}

/// A shifted monic ultraspherical family up to a fixed degree, tied to a
/// source interval `[A, B]` that is mapped affinely onto `[0, 1]`.
///
/// Immutable after construction; all evaluation methods are read-only.
#[derive(Debug, Clone)]
pub struct Basis {
    lambda: f64,
    degree: usize,
    interval: (f64, f64),
    monomial_coeffs: Vec<Vec<f64>>,
    rec_a: Vec<f64>,
    rec_b: Vec<f64>,
}

impl Basis {
    pub fn new(lambda: f64, degree: usize, interval: (f64, f64)) -> Result<Self, BasisError> {
        check_lambda(lambda)?;
        let (a, b) = interval;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(BasisError::InvalidInterval(a, b));
        }
        let monomial_coeffs = monomial_coefficients(lambda, degree)?;
        let mut rec_a = Vec::new();
        let mut rec_b = Vec::new();
        for j in 1..degree.max(1) {
            let (aj, bj) = recurrence_coefficients(lambda, j)?;
            rec_a.push(aj);
            rec_b.push(bj);
        }
        Ok(Basis {
            lambda,
            degree,
            interval,
            monomial_coeffs,
            rec_a,
            rec_b,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    /// Width of the source interval.
    pub fn interval_length(&self) -> f64 {
        self.interval.1 - self.interval.0
    }

    /// Monomial coefficients of `C_j` on the unit interval.
    pub fn monomial_coeffs(&self) -> &[Vec<f64>] {
        &self.monomial_coeffs
    }

    /// `(C_0(x), ..., C_N(x))` by the three-term recurrence, `x` in `[0, 1]`.
    pub fn eval_all(&self, x: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.degree + 1);
        out.push(1.0);
        if self.degree >= 1 {
            out.push(x - 0.5);
        }
        for j in 1..self.degree {
            let next = (x - self.rec_a[j - 1]) * out[j] - self.rec_b[j - 1] * out[j - 1];
            out.push(next);
        }
        out
    }

    /// `||C_j||_w^2 = integral_0^1 w(x) C_j(x)^2 dx` in closed form:
    /// `pi 2^(1 - 4 lambda - 4 j) j! Gamma(j + 2 lambda) / (Gamma(j + lambda)^2 (j + lambda))`.
    pub fn squared_norm(&self, j: usize) -> f64 {
        let lam = self.lambda;
        let jf = j as f64;
        // Gamma(j + 2 lambda) can be negative only at j = 0 with lambda < 0;
        // the sign is cancelled by the (j + lambda) factor in the denominator.
        let (lg_num, s_num) = special::log_gamma_sign(jf + 2.0 * lam).expect("non-pole by domain");
        let (lg_den, _) = special::log_gamma_sign(jf + lam).expect("non-pole by domain");
        let (lg_fact, _) = special::log_gamma_sign(jf + 1.0).expect("positive");
        let log_mag = std::f64::consts::PI.ln()
            + (1.0 - 4.0 * lam - 4.0 * jf) * std::f64::consts::LN_2
            + lg_fact
            + lg_num
            - 2.0 * lg_den
            - (jf + lam).abs().ln();
        s_num * (jf + lam).signum() * log_mag.exp()
    }
}

/// A Gauss rule for the weight `(x - x^2)^alpha` on `[0, 1]`.
///
/// With n nodes it integrates `w(x) p(x)` exactly for polynomials p up to
/// degree `2n - 1`.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
}

impl QuadratureRule {
    /// `integral_0^1 (x - x^2)^alpha f(x) dx`, approximately for smooth f.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Evaluate the monic orthogonal polynomial of the given degree and its
/// derivative at `x` by recurring both.
fn eval_monic_and_deriv(rec_b: &[f64], degree: usize, x: f64) -> (f64, f64) {
    if degree == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x - 0.5);
    let (mut d0, mut d1) = (0.0, 1.0);
    for j in 1..degree {
        let b = rec_b[j - 1];
        let p2 = (x - 0.5) * p1 - b * p0;
        let d2 = p1 + (x - 0.5) * d1 - b * d0;
        p0 = p1;
        p1 = p2;
        d0 = d1;
        d1 = d2;
    }
    (p1, d1)
}

/// Gauss rule for `(x - x^2)^alpha` on `[0, 1]`, `alpha > -1`, `alpha != -1/2`.
///
/// Nodes are the roots of the degree-n monic polynomial of the family with
/// `lambda = alpha + 1/2`, located by safeguarded Newton iteration between
/// the interlacing roots of the previous degree. Weights come from the
/// Christoffel function `w_i = 1 / sum_k C_k(x_i)^2 / ||C_k||^2`.
pub fn gauss_jacobi(alpha: f64, n: usize) -> Result<QuadratureRule, BasisError> {
    if !alpha.is_finite() || alpha <= -1.0 || alpha == -0.5 {
        return Err(BasisError::InvalidAlpha(alpha));
    }
    if n == 0 {
        return Err(BasisError::EmptyRule);
    }
    let lambda = alpha + 0.5;
    let mut rec_b = Vec::with_capacity(n.saturating_sub(1));
    for j in 1..n {
        rec_b.push(recurrence_coefficients(lambda, j)?.1);
    }

    // Progressive root computation: roots of degree m interlace those of m-1.
    let mut roots = vec![0.5];
    for m in 2..=n {
        let mut separators = Vec::with_capacity(m + 1);
        separators.push(0.0);
        separators.extend_from_slice(&roots);
        separators.push(1.0);
        let mut next = Vec::with_capacity(m);
        for i in 0..m {
            let (mut lo, mut hi) = (separators[i], separators[i + 1]);
            let (mut flo, _) = eval_monic_and_deriv(&rec_b, m, lo);
            let mut x = 0.5 * (lo + hi);
            let mut converged = false;
            for _ in 0..QUAD_NEWTON_MAX_ITER {
                let (f, df) = eval_monic_and_deriv(&rec_b, m, x);
                // keep the bracket current so bisection stays valid
                if f * flo <= 0.0 {
                    hi = x;
                } else {
                    lo = x;
                    flo = f;
                }
                let step = if df != 0.0 { f / df } else { f64::NAN };
                let candidate = x - step;
                let x_new = if candidate.is_finite() && candidate > lo && candidate < hi {
                    candidate
                } else {
                    0.5 * (lo + hi)
                };
                if (x_new - x).abs() <= 1e-16 * (1.0 + x.abs()) || x_new == x {
                    x = x_new;
                    converged = true;
                    break;
                }
                x = x_new;
            }
            if !converged && (hi - lo) > 1e-14 {
                return Err(BasisError::NodeNewtonFailed { index: i });
            }
            next.push(x);
        }
        roots = next;
    }

    // Squared norms h_k from h_0 = Beta(alpha+1, alpha+1) and h_k = h_{k-1} b_k.
    let h0 = (2.0 * special::log_gamma(alpha + 1.0)? - special::log_gamma(2.0 * alpha + 2.0)?)
        .exp();
    let mut norms = vec![h0];
    for j in 1..n {
        norms.push(norms[j - 1] * rec_b[j - 1]);
    }
    let weights: Vec<f64> = roots
        .iter()
        .map(|&x| {
            let mut sum = 0.0;
            let (mut p0, mut p1) = (1.0, x - 0.5);
            sum += p0 * p0 / norms[0];
            if n > 1 {
                sum += p1 * p1 / norms[1];
                for j in 1..n - 1 {
                    let p2 = (x - 0.5) * p1 - rec_b[j - 1] * p0;
                    p0 = p1;
                    p1 = p2;
                    sum += p1 * p1 / norms[j + 1];
                }
            }
            1.0 / sum
        })
        .collect();
    Ok(QuadratureRule {
        nodes: roots,
        weights,
        alpha,
    })
}

/// Best-L2(w) coefficients of `f` against the basis, by Gauss quadrature of
/// the weighted inner products: `a_j = <f, C_j>_w / ||C_j||_w^2`.
///
/// The rule has `N + 10` points by default; use [`project_with`] to choose.
/// Gauss nodes are interior, so `f` is never sampled at the endpoints.
pub fn project(f: impl Fn(f64) -> f64, basis: &Basis) -> Result<Vec<f64>, BasisError> {
    project_with(f, basis, basis.degree() + PROJECTION_EXTRA_NODES)
}

/// [`project`] with an explicit quadrature size.
pub fn project_with(
    f: impl Fn(f64) -> f64,
    basis: &Basis,
    quad_points: usize,
) -> Result<Vec<f64>, BasisError> {
    let rule = gauss_jacobi(basis.lambda() - 0.5, quad_points.max(basis.degree() + 1))?;
    let n = basis.degree();
    let mut inner = vec![0.0; n + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let vals = basis.eval_all(x);
        let fx = f(x);
        for j in 0..=n {
            inner[j] += w * fx * vals[j];
        }
    }
    for (j, v) in inner.iter_mut().enumerate() {
        *v /= basis.squared_norm(j);
    }
    Ok(inner)
}

// Guard against accidental division by a denormal pivot elsewhere; the basis
// module itself never solves systems but shares the constant's rationale.
const _: () = assert!(PIVOT_MIN > 0.0);
