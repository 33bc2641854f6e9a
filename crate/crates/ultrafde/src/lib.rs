//! Spectral collocation solver for linear and nonlinear multi-order
//! fractional differential equations with boundary conditions.
//!
//! The trial space is a family of shifted monic ultraspherical (Gegenbauer)
//! polynomials, orthogonal on `[0, 1]` under the weight `(x - x^2)^(lambda - 1/2)`.
//! Caputo fractional derivatives of the basis are available in closed form,
//! which turns a multi-order fractional boundary value problem
//!
//! ```text
//! D^q u(x) + sum_i rho_i(x) D^{s_i} u(x) + g(x) u(x) + N(x, u(x)) = G(x)
//! ```
//!
//! into a small dense algebraic system by collocation at interior nodes, with
//! boundary conditions enforced as replacement rows. Linear systems are solved
//! by LU with partial pivoting, nonlinear ones by a damped Newton iteration.
//!
//! Module map:
//!
//! - [`special`]: gamma-function machinery and the Caputo derivative of monomials
//! - [`basis`]: basis construction, evaluation, quadrature, projection
//! - [`fracdiff`]: fractional/integer derivative operators of the basis
//! - [`numerics`]: dense LU and damped Newton
//! - [`expr`]: expression language for coefficients, right-hand sides and
//!   nonlinear terms, with a forward-mode derivative in `u`
//! - [`solver`]: problem model, collocation assembly, solve, error reporting
//! - [`problem`]: problem-file format, built-in benchmark problems, CSV reports

pub mod basis;
pub mod expr;
pub mod fracdiff;
pub mod numerics;
pub mod problem;
pub mod solver;
pub mod special;
pub mod tolerances;

pub use basis::{Basis, QuadratureRule};
pub use expr::{DualValue, ExprNode};
pub use numerics::{DenseMatrix, NewtonReport};
pub use solver::{
    BoundaryCondition, BoundaryEnd, FdeProblem, NodeScheme, SolverConfig, SpectralSolution,
};
pub use special::CaputoOrder;
