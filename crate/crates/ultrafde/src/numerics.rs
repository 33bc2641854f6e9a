//! Small dense linear algebra and a damped Newton iteration.
//!
//! The collocation systems are at most 65x65, so a straightforward LU with
//! partial pivoting is all the solver needs. Robustness beats speed here.

use crate::tolerances::PIVOT_MIN;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("matrix entries must all be finite")]
    NonFiniteEntry,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: matrix is {rows}x{cols}, vector has length {len}")]
    DimensionMismatch { rows: usize, cols: usize, len: usize },
    #[error("singular matrix: pivot {pivot:.3e} at elimination step {index}")]
    SingularMatrix { index: usize, pivot: f64 },
    #[error("residual became non-finite at Newton iteration {iteration}")]
    NonFiniteResidual { iteration: usize },
}

/// Row-major dense matrix of f64.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from row vectors; every entry must be finite.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<Vec<f64>>) -> Self {
        assert_eq!(entries.len(), rows);
        let mut data = Vec::with_capacity(rows * cols);
        for row in &entries {
            assert_eq!(row.len(), cols);
            data.extend_from_slice(row);
        }
        DenseMatrix { rows, cols, data }
    }

    /// Validates finiteness of all entries.
    pub fn try_from_data(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self, NumericsError> {
        assert_eq!(data.len(), rows * cols);
        if data.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::NonFiniteEntry);
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Kahan-compensated accumulation, for sums whose terms nearly cancel.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, term: f64) {
        let y = term - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Diagnostics of one LU factorization/solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuInfo {
    /// Smallest pivot magnitude encountered during elimination.
    pub min_pivot: f64,
    /// Infinity norm of the input matrix.
    pub matrix_inf_norm: f64,
}

/// Solve `A x = b` by LU with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    lu_solve_with_info(a, b).map(|(x, _)| x)
}

/// [`lu_solve`] returning pivot diagnostics alongside the solution.
pub fn lu_solve_with_info(
    a: &DenseMatrix,
    b: &[f64],
) -> Result<(Vec<f64>, LuInfo), NumericsError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(NumericsError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if b.len() != n {
        return Err(NumericsError::DimensionMismatch {
            rows: a.rows(),
            cols: a.cols(),
            len: b.len(),
        });
    }
    if a.data.iter().any(|v| !v.is_finite()) || b.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFiniteEntry);
    }
    let matrix_inf_norm = a.inf_norm();
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut min_pivot = f64::INFINITY;

    for col in 0..n {
        // partial pivoting: largest magnitude in the remaining column
        let mut pivot_row = col;
        let mut pivot_val = m.get(col, col).abs();
        for r in col + 1..n {
            let v = m.get(r, col).abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if pivot_val < PIVOT_MIN {
            return Err(NumericsError::SingularMatrix {
                index: col,
                pivot: pivot_val,
            });
        }
        min_pivot = min_pivot.min(pivot_val);
        if pivot_row != col {
            for c in 0..n {
                let tmp = m.get(col, c);
                m.set(col, c, m.get(pivot_row, c));
                m.set(pivot_row, c, tmp);
            }
            rhs.swap(col, pivot_row);
        }
        let diag = m.get(col, col);
        for r in col + 1..n {
            let factor = m.get(r, col) / diag;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                let v = m.get(r, c) - factor * m.get(col, c);
                m.set(r, c, v);
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    // back substitution
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let mut s = rhs[r];
        for c in r + 1..n {
            s -= m.get(r, c) * x[c];
        }
        x[r] = s / m.get(r, r);
    }
    Ok((
        x,
        LuInfo {
            min_pivot,
            matrix_inf_norm,
        },
    ))
}

/// Outcome of a damped Newton run.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonReport {
    pub converged: bool,
    pub iterations: usize,
    pub final_residual_norm: f64,
    /// Infinity norms of the accepted steps, one per iteration.
    pub step_norms: Vec<f64>,
    /// Smallest LU pivot over all Jacobian solves.
    pub min_pivot: f64,
    /// Largest Jacobian infinity norm over all iterations.
    pub jacobian_inf_norm: f64,
}

/// Damped Newton iteration: full step first, halved up to 20 times while the
/// residual norm does not decrease. Reaching `max_iter` yields a
/// non-converged report rather than an error; the caller decides.
pub fn newton_solve(
    residual: impl Fn(&[f64]) -> Vec<f64>,
    jacobian: impl Fn(&[f64]) -> DenseMatrix,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, NewtonReport), NumericsError> {
    let mut x = x0.to_vec();
    let mut step_norms = Vec::new();
    let mut min_pivot = f64::INFINITY;
    let mut jac_norm: f64 = 0.0;
    let mut res = residual(&x);
    let mut res_norm = inf_norm(&res);
    if res.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFiniteResidual { iteration: 0 });
    }

    for iteration in 0..max_iter {
        if res_norm <= tol {
            return Ok((
                x,
                NewtonReport {
                    converged: true,
                    iterations: iteration,
                    final_residual_norm: res_norm,
                    step_norms,
                    min_pivot: if min_pivot.is_finite() { min_pivot } else { 0.0 },
                    jacobian_inf_norm: jac_norm,
                },
            ));
        }
        let jac = jacobian(&x);
        let neg_res: Vec<f64> = res.iter().map(|v| -v).collect();
        // A Jacobian that degenerates mid-iteration is a breakdown of the
        // iteration, not of the problem: report non-convergence and let the
        // caller decide. At the starting point it is a structural defect.
        let (step, info) = match lu_solve_with_info(&jac, &neg_res) {
            Ok(ok) => ok,
            Err(NumericsError::SingularMatrix { .. }) if iteration > 0 => {
                return Ok((
                    x,
                    NewtonReport {
                        converged: false,
                        iterations: iteration,
                        final_residual_norm: res_norm,
                        step_norms,
                        min_pivot: if min_pivot.is_finite() { min_pivot } else { 0.0 },
                        jacobian_inf_norm: jac_norm,
                    },
                ));
            }
            Err(e) => return Err(e),
        };
        min_pivot = min_pivot.min(info.min_pivot);
        jac_norm = jac_norm.max(info.matrix_inf_norm);

        // damping: halve while the residual norm fails to decrease
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..=20 {
            let candidate: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a + scale * s).collect();
            let cand_res = residual(&candidate);
            if cand_res.iter().any(|v| !v.is_finite()) {
                return Err(NumericsError::NonFiniteResidual {
                    iteration: iteration + 1,
                });
            }
            let cand_norm = inf_norm(&cand_res);
            if cand_norm < res_norm || scale <= 1.0 / (1u64 << 20) as f64 {
                accepted = Some((candidate, cand_res, cand_norm));
                break;
            }
            scale *= 0.5;
        }
        let (next_x, next_res, next_norm) =
            accepted.expect("the final halving is always accepted");
        step_norms.push(scale * inf_norm(&step));
        x = next_x;
        res = next_res;
        res_norm = next_norm;
    }

    let converged = res_norm <= tol;
    Ok((
        x,
        NewtonReport {
            converged,
            iterations: max_iter,
            final_residual_norm: res_norm,
            step_norms,
            min_pivot: if min_pivot.is_finite() { min_pivot } else { 0.0 },
            jacobian_inf_norm: jac_norm,
        },
    ))
}

/// Central finite-difference Jacobian with step `h = 1e-6 (1 + |x_i|)`,
/// for checking analytic Jacobians in tests.
pub fn finite_difference_jacobian(
    residual: impl Fn(&[f64]) -> Vec<f64>,
    x: &[f64],
) -> DenseMatrix {
    let n = x.len();
    let m = residual(x).len();
    let mut jac = DenseMatrix::zeros(m, n);
    for i in 0..n {
        let h = 1e-6 * (1.0 + x[i].abs());
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        xp[i] += h;
        xm[i] -= h;
        let fp = residual(&xp);
        let fm = residual(&xm);
        for r in 0..m {
            jac.set(r, i, (fp[r] - fm[r]) / (2.0 * h));
        }
    }
    jac
}
