//! Caputo fractional derivatives of the basis, classical derivatives of the
//! monomial table, and the node-evaluation operator matrices the collocation
//! solver assembles from.
//!
//! The fractional derivative of a basis polynomial is computed term-wise on
//! its monomial table: `D^q C_j(x) = sum_{k >= ceil(q)} c[j][k]
//! Gamma(k+1) / Gamma(k+1-q) x^(k-q)`. Entries with `j < ceil(q)` are zero by
//! construction, not by cancellation: polynomials of degree below `ceil(q)`
//! are annihilated.

use crate::basis::Basis;
use crate::numerics::DenseMatrix;
use crate::special::{self, CaputoOrder, SpecialError};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FracDiffError {
    #[error("fractional derivative of order {order} is singular at x = 0")]
    SingularAtZero { order: f64 },
    #[error("node {0} lies outside the unit interval")]
    NodeOutOfRange(f64),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

/// `(D^q C_0(x), ..., D^q C_N(x))` on the unit interval.
///
/// Requires `x > 0` for non-integer q (the leading surviving power is
/// `x^(ceil(q) - q)`, and lower residual terms would be singular), `x >= 0`
/// for integer q.
pub fn frac_deriv_basis_at(
    basis: &Basis,
    order: &CaputoOrder,
    x: f64,
) -> Result<Vec<f64>, FracDiffError> {
    if order.value() == 0.0 {
        // identity operator: plain evaluation by the stable recurrence
        return Ok(basis.eval_all(x));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(FracDiffError::NodeOutOfRange(x));
    }
    if x == 0.0 && !order.is_integer() {
        return Err(FracDiffError::SingularAtZero {
            order: order.value(),
        });
    }
    let q = order.value();
    let ceil_q = order.ceil() as usize;
    let n = basis.degree();
    let table = basis.monomial_coeffs();

    // Gamma(k+1)/Gamma(k+1-q) for k = ceil(q)..N; both arguments positive.
    // Integer orders use the exact falling factorial k!/(k-q)! so the
    // classical path introduces no gamma-approximation noise.
    let mut ratios = vec![0.0; n + 1];
    for (k, r) in ratios.iter_mut().enumerate().skip(ceil_q) {
        let kf = k as f64;
        *r = if order.is_integer() {
            (0..ceil_q).fold(1.0, |acc, i| acc * (kf - i as f64))
        } else {
            special::gamma_ratio(kf + 1.0, kf + 1.0 - q)?
        };
    }
    // x^(k-q) = x^(ceil(q)-q) * x^(k-ceil(q)), accumulated sequentially
    let power_base = if order.is_integer() {
        1.0
    } else {
        x.powf(ceil_q as f64 - q)
    };
    let mut out = vec![0.0; n + 1];
    for j in ceil_q..=n {
        // terms alternate in sign and nearly cancel at high degree;
        // compensated summation keeps the error at the max-term scale
        let mut sum = crate::numerics::CompensatedSum::default();
        let mut xp = power_base;
        for k in ceil_q..=j {
            sum.add(table[j][k] * ratios[k] * xp);
            xp *= x;
        }
        out[j] = sum.value();
    }
    Ok(out)
}

/// Node-evaluation matrix of `D^q` against the basis: `M[n][j] = (D^q C_j)(x_n)`.
///
/// Columns `j < ceil(q)` are identically zero. At `q = 0` the matrix is plain
/// basis evaluation at the nodes.
#[derive(Debug, Clone)]
pub struct FracDerivOperator {
    pub order: CaputoOrder,
    pub nodes: Vec<f64>,
    pub matrix: DenseMatrix,
}

/// Build the operator matrix row by row at the given unit-interval nodes.
pub fn build_operator(
    basis: &Basis,
    order: &CaputoOrder,
    nodes: &[f64],
) -> Result<FracDerivOperator, FracDiffError> {
    let n = basis.degree();
    let mut rows = Vec::with_capacity(nodes.len());
    for &x in nodes {
        rows.push(frac_deriv_basis_at(basis, order, x)?);
    }
    let matrix = DenseMatrix::from_rows(nodes.len(), n + 1, rows);
    Ok(FracDerivOperator {
        order: *order,
        nodes: nodes.to_vec(),
        matrix,
    })
}

/// Monomial-coefficient table of the classical k-th derivative of each basis
/// polynomial, by k-fold power rule: `d[j]` are the coefficients of
/// `C_j^(k)` on the unit interval. Degenerate rows (`j < k`) are `[0]`.
///
/// Evaluating these rows at 0 or 1 produces the boundary-condition entries.
pub fn integer_deriv_coeffs(basis: &Basis, k: usize) -> Vec<Vec<f64>> {
    basis
        .monomial_coeffs()
        .iter()
        .map(|row| {
            if row.len() <= k {
                return vec![0.0];
            }
            // d/dx^k of x^m is m!/(m-k)! x^(m-k); the falling factorial is an
            // exact integer so each coefficient rounds only once
            (k..row.len())
                .map(|m| {
                    let ff = (0..k).fold(1.0, |acc, i| acc * (m - i) as f64);
                    row[m] * ff
                })
                .collect()
        })
        .collect()
}

/// Horner evaluation of a monomial-coefficient vector.
pub fn eval_monomial(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}
