//! Gamma-function machinery and the Caputo fractional derivative of monomials.
//!
//! These are the two primitives everything else builds on: the basis norms,
//! the quadrature weights, and the fractional derivative of the basis are all
//! gamma-ratio expressions, and the Caputo derivative of a polynomial is the
//! term-wise Caputo derivative of its monomials.

use crate::tolerances::{GAMMA_POLE_EPS, INTEGER_SNAP_EPS};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("log_gamma requires a positive argument, got {0}")]
    NonPositiveArgument(f64),
    #[error("gamma pole at non-positive integer {0}")]
    GammaPole(f64),
    #[error("Caputo order must be a finite value >= 0, got {0}")]
    InvalidOrder(f64),
    #[error("monomial exponent must be finite and >= 0, got {0}")]
    InvalidExponent(f64),
    #[error("D^{order} x^{exponent} is singular at x = 0")]
    SingularAtZero { order: f64, exponent: f64 },
}

/// Lanczos coefficients, g = 7, 9 terms (Godfrey's set, as used by Boost and
/// CPython). Relative accuracy of the resulting gamma is ~1e-15 for z > 0.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// Natural log of the gamma function for `z > 0`.
pub fn log_gamma(z: f64) -> Result<f64, SpecialError> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(SpecialError::NonPositiveArgument(z));
    }
    Ok(lanczos_log_gamma(z))
}

fn lanczos_log_gamma(z: f64) -> f64 {
    // ln Gamma(z) = 0.5 ln(2 pi) + (z - 0.5) ln t - t + ln A(z), t = z + g - 0.5
    let mut a = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (z - 1.0 + i as f64);
    }
    let t = z + LANCZOS_G - 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z - 0.5) * t.ln() - t + a.ln()
}

/// True when `z` is within [`GAMMA_POLE_EPS`] of a non-positive integer.
pub fn is_gamma_pole(z: f64) -> bool {
    z < 0.5 && (z - z.round()).abs() <= GAMMA_POLE_EPS && z.round() <= 0.0
}

/// ln |Gamma(z)| together with the sign of Gamma(z), for any non-pole `z`.
///
/// Negative arguments go through the reflection formula
/// `Gamma(z) = pi / (sin(pi z) Gamma(1 - z))`.
pub(crate) fn log_gamma_sign(z: f64) -> Result<(f64, f64), SpecialError> {
    if z > 0.0 {
        return Ok((lanczos_log_gamma(z), 1.0));
    }
    if is_gamma_pole(z) {
        return Err(SpecialError::GammaPole(z));
    }
    let s = (std::f64::consts::PI * z).sin();
    let log_abs = std::f64::consts::PI.ln() - s.abs().ln() - lanczos_log_gamma(1.0 - z);
    Ok((log_abs, s.signum()))
}

/// The gamma function for any `z` that is not a non-positive integer.
pub fn gamma(z: f64) -> Result<f64, SpecialError> {
    if !z.is_finite() {
        return Err(SpecialError::InvalidOrder(z));
    }
    let (log_abs, sign) = log_gamma_sign(z)?;
    Ok(sign * log_abs.exp())
}

/// Ratio `Gamma(num) / Gamma(den)` computed in log space when both arguments
/// are positive, so basis coefficients stay finite up to degree N = 64.
pub(crate) fn gamma_ratio(num: f64, den: f64) -> Result<f64, SpecialError> {
    let (ln, sn) = log_gamma_sign(num)?;
    let (ld, sd) = log_gamma_sign(den)?;
    Ok(sn * sd * (ln - ld).exp())
}

/// A Caputo differentiation order `q >= 0` with its integer brackets.
///
/// Orders within [`INTEGER_SNAP_EPS`] of an integer are snapped to it, so the
/// integer-order path is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaputoOrder {
    q: f64,
    ceil_q: u32,
    floor_q: u32,
}

impl CaputoOrder {
    pub fn new(q: f64) -> Result<Self, SpecialError> {
        if !q.is_finite() || q < 0.0 {
            return Err(SpecialError::InvalidOrder(q));
        }
        let snapped = if (q - q.round()).abs() <= INTEGER_SNAP_EPS {
            q.round()
        } else {
            q
        };
        Ok(CaputoOrder {
            q: snapped,
            ceil_q: snapped.ceil() as u32,
            floor_q: snapped.floor() as u32,
        })
    }

    pub fn value(&self) -> f64 {
        self.q
    }

    /// Smallest integer >= q.
    pub fn ceil(&self) -> u32 {
        self.ceil_q
    }

    /// Largest integer <= q.
    pub fn floor(&self) -> u32 {
        self.floor_q
    }

    pub fn is_integer(&self) -> bool {
        self.ceil_q == self.floor_q
    }
}

/// Caputo derivative of the monomial `x^beta` of order `q`, evaluated at `x`.
///
/// Non-negative integer exponents below `ceil(q)` differentiate to zero
/// (constants and low-degree monomials are annihilated). Otherwise the value
/// is `Gamma(beta + 1) / Gamma(beta + 1 - q) * x^(beta - q)`, and a pole of
/// the denominator gamma also yields zero, which is the integer-order
/// classical case.
pub fn caputo_monomial(order: &CaputoOrder, beta: f64, x: f64) -> Result<f64, SpecialError> {
    if !beta.is_finite() || beta < 0.0 {
        return Err(SpecialError::InvalidExponent(beta));
    }
    let q = order.value();
    let beta_is_int = (beta - beta.round()).abs() <= INTEGER_SNAP_EPS;
    if beta_is_int && beta.round() < order.ceil() as f64 {
        return Ok(0.0);
    }
    let den = beta + 1.0 - q;
    if is_gamma_pole(den) {
        return Ok(0.0);
    }
    let power = beta - q;
    if x == 0.0 && power < 0.0 {
        return Err(SpecialError::SingularAtZero {
            order: q,
            exponent: beta,
        });
    }
    // Gamma(beta+1)/Gamma(beta+1-q) collapses to the exact falling factorial
    // (beta)(beta-1)...(beta-q+1) when q is an integer.
    let ratio = if order.is_integer() {
        (0..order.ceil()).fold(1.0, |acc, i| acc * (beta - i as f64))
    } else {
        gamma_ratio(beta + 1.0, den)?
    };
    Ok(ratio * x.powf(power))
}
