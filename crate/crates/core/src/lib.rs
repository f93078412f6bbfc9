//! Explicit one-step solvers for conformable fractional initial value problems
//!
//! ```text
//! D^α y(t) = f(t, y(t)),   y(a) = y0,   a ≤ t ≤ b,   0 < α ≤ 1
//! ```
//!
//! where `D^α` is the conformable derivative, `D^α y(t) = t^(1-α) y'(t)`.
//!
//! The crate carries two fractional Euler-type schemes side by side:
//!
//! * [`SchemeKind::ConformableEuler`], the widely used `y += h^α/α · f`, which
//!   only reduces to a consistent method when `α = 1`;
//! * [`SchemeKind::ModifiedConformableEuler`], `y += (t_{k+1}^α - t_k^α)/α · f`,
//!   which stays consistent on all of `0 < α ≤ 1`;
//!
//! plus classical forward Euler as the baseline, an independent reference
//! integrator working in the variable `s = t^α/α`, a small expression language
//! for right-hand sides, and the diagnostics needed to tell the two schemes
//! apart empirically (error norms, observed orders, consistency ratios).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x <= bound)` is used on purpose: it is true for NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod expr;
pub mod ivp;
pub mod oracle;
pub mod schemes;

pub use analysis::{ConvergenceReport, RatioDiagnostic, Verdict};
pub use expr::{Expr, ParseError};
pub use ivp::{Alpha, IvpProblem, Trajectory, UniformGrid};
pub use oracle::catalog::NamedProblem;
pub use schemes::{Rhs, SchemeKind};

use alloc::string::String;

/// Errors raised while building problems, grids or running studies.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("fractional order must satisfy 0 < alpha <= 1, got {0}")]
    InvalidAlpha(f64),
    #[error("invalid interval [{a}, {b}]: need 0 <= a < b, both finite")]
    InvalidInterval { a: f64, b: f64 },
    #[error("number of steps must be at least 1")]
    ZeroSteps,
    #[error("node index {index} out of range 0..={n_steps}")]
    NodeOutOfRange { index: usize, n_steps: usize },
    #[error("initial value must be finite, got {0}")]
    NonFiniteInitialValue(f64),
    #[error("exact solution may only depend on t")]
    ExactDependsOnY,
    #[error("exact solution gives {found} at t = {t}, expected initial value {expected}")]
    ExactMismatch { t: f64, expected: f64, found: f64 },
    #[error("grid [{grid_start}, {grid_end}] does not span problem interval [{a}, {b}]")]
    GridMismatch {
        grid_start: f64,
        grid_end: f64,
        a: f64,
        b: f64,
    },
    #[error("trajectory has {found} values, grid needs {expected}")]
    SampleCount { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
