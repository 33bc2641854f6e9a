//! Shared oracle machinery for the integration suites: an exact-rational
//! construction of the basis (independent of the library's floating-point
//! recurrence) and a Stirling-series log-gamma (independent of the library's
//! Lanczos approximation).

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Monomial coefficient rows of the shifted monic family for a rational
/// lambda, by running the three-term recurrence in exact arithmetic.
pub fn rational_monomial_table(lambda: &BigRational, n: usize) -> Vec<Vec<BigRational>> {
    let half = ratio(1, 2);
    let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    if n >= 1 {
        rows.push(vec![-half.clone(), BigRational::one()]);
    }
    for j in 1..n {
        let jf = BigRational::from(BigInt::from(j as i64));
        let two_lambda = lambda * ratio(2, 1);
        let b = &jf * (&jf + &two_lambda - BigRational::one())
            / (ratio(16, 1) * (&jf + lambda) * (&jf + lambda - BigRational::one()));
        let cur = rows[j].clone();
        let prev = rows[j - 1].clone();
        let mut next = vec![BigRational::zero(); j + 2];
        for (k, c) in cur.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= &half * c;
        }
        for (k, c) in prev.iter().enumerate() {
            next[k] -= &b * c;
        }
        rows.push(next);
    }
    rows
}

/// ln Gamma(z) for z > 0 by argument shifting and the Stirling series,
/// truncated after the 1/z^13 term (error < 1e-17 for the shifted z >= 12).
pub fn stirling_log_gamma(z: f64) -> f64 {
    assert!(z > 0.0);
    let mut shift = 0.0;
    let mut zz = z;
    while zz < 12.0 {
        shift -= zz.ln();
        zz += 1.0;
    }
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
    ];
    let zi = 1.0 / zz;
    let z2 = zi * zi;
    let series = zi
        * (C[0] + z2 * (C[1] + z2 * (C[2] + z2 * (C[3] + z2 * (C[4] + z2 * (C[5] + z2 * C[6]))))));
    shift + 0.5 * (2.0 * std::f64::consts::PI).ln() + (zz - 0.5) * zz.ln() - zz + series
}

/// Oracle gamma ratio Gamma(a)/Gamma(b) for positive arguments.
pub fn oracle_gamma_ratio(a: f64, b: f64) -> f64 {
    (stirling_log_gamma(a) - stirling_log_gamma(b)).exp()
}

/// Oracle Caputo derivative of the degree-j basis polynomial at x, from the
/// exact-rational coefficient table and the Stirling gamma, term by term.
pub fn oracle_frac_deriv(table: &[Vec<BigRational>], j: usize, q: f64, x: f64) -> f64 {
    let ceil_q = q.ceil() as usize;
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in (ceil_q..=j).rev() {
        let c = table[j][k].to_f64().unwrap();
        let term = c * oracle_gamma_ratio(k as f64 + 1.0, k as f64 + 1.0 - q) * x.powf(k as f64 - q);
        // Kahan step
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Classical k-th derivative of the degree-j basis polynomial at x, from the
/// exact-rational table.
pub fn oracle_integer_deriv(table: &[Vec<BigRational>], j: usize, m: usize, x: f64) -> f64 {
    let mut sum = 0.0;
    for k in (m..=j).rev() {
        let c = table[j][k].to_f64().unwrap();
        let ff = (0..m).fold(1.0, |acc, i| acc * (k - i) as f64);
        sum += c * ff * x.powi((k - m) as i32);
    }
    sum
}

/// Expand a polynomial given by monomial coefficients over the basis (the
/// coefficient table is unit lower triangular, so back-substitution is exact
/// up to rounding).
pub fn monomial_to_basis_coeffs(mono: &[f64], table: &[Vec<f64>]) -> Vec<f64> {
    let n = table.len() - 1;
    assert!(mono.len() <= n + 1);
    let mut p = vec![0.0; n + 1];
    p[..mono.len()].copy_from_slice(mono);
    let mut a = vec![0.0; n + 1];
    for k in (0..=n).rev() {
        let mut v = p[k];
        for j in k + 1..=n {
            v -= a[j] * table[j][k];
        }
        a[k] = v;
    }
    a
}

/// Compose a polynomial (monomial coefficients in the domain variable) with
/// the affine map x = a + (b - a) t, returning monomial coefficients in t.
pub fn compose_affine(mono: &[f64], a: f64, b: f64) -> Vec<f64> {
    // Horner in polynomial arithmetic: p(a + w t) with w = b - a
    let w = b - a;
    let mut out: Vec<f64> = vec![];
    for &c in mono.iter().rev() {
        // out = out * (a + w t) + c
        let mut next = vec![0.0; out.len() + 1];
        for (i, &o) in out.iter().enumerate() {
            next[i] += o * a;
            next[i + 1] += o * w;
        }
        if next.is_empty() {
            next.push(0.0);
        }
        next[0] += c;
        out = next;
    }
    if out.is_empty() {
        out.push(0.0);
    }
    out
}

/// Deterministic xorshift for reproducible random trials.
pub struct TestRng(pub u64);

impl TestRng {
    pub fn next_u64(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[(self.next_u64() % items.len() as u64) as usize]
    }
}
