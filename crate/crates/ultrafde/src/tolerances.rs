//! Library-wide numerical tolerance constants.
//!
//! Every fixed threshold used by the library is defined here so the precision
//! contract lives in one place.

/// Relative accuracy of [`crate::special::log_gamma`] (Lanczos, g = 7, 9 terms).
pub const LOG_GAMMA_REL: f64 = 1e-14;

/// Relative accuracy of [`crate::special::gamma`], including the reflection
/// path for negative arguments.
pub const GAMMA_REL: f64 = 1e-13;

/// A gamma-function argument within this distance of a non-positive integer
/// is treated as a pole. In the Caputo formula a pole in the denominator
/// annihilates the term, which is what makes integer orders reduce exactly
/// to the classical derivative.
pub const GAMMA_POLE_EPS: f64 = 1e-12;

/// An order or exponent within this distance of an integer is snapped to it.
pub const INTEGER_SNAP_EPS: f64 = 1e-12;

/// LU back-substitution residual bound for well-conditioned systems:
/// `||Ax - b||_inf <= LINSOLVE_RESIDUAL * (1 + ||b||_inf)`.
pub const LINSOLVE_RESIDUAL: f64 = 1e-10;

/// A pivot below this magnitude is treated as an exact singularity.
pub const PIVOT_MIN: f64 = 1e-300;

/// The solver flags a system as ill-conditioned when the smallest LU pivot
/// falls below `ILL_CONDITIONING_RATIO * ||A||_inf`.
pub const ILL_CONDITIONING_RATIO: f64 = 1e-10;

/// Default Newton tolerance scale: `tol = NEWTON_TOL_SCALE * (1 + ||rhs||_inf)`.
pub const NEWTON_TOL_SCALE: f64 = 1e-13;

/// Newton iteration cap for the collocation solver.
pub const NEWTON_MAX_ITER: usize = 50;

/// Quadrature node-finding iteration cap per root.
pub const QUAD_NEWTON_MAX_ITER: usize = 100;

/// Boundary conditions of a returned solution hold to this absolute accuracy.
pub const BC_ABS: f64 = 1e-10;

/// Extra quadrature nodes used by default when projecting onto a degree-N
/// basis (the rule has `N + PROJECTION_EXTRA_NODES` points).
pub const PROJECTION_EXTRA_NODES: usize = 10;
