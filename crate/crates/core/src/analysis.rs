//! Consistency and convergence diagnostics.
//!
//! If `y_{k+1} - y_k = h^α/α · D^α y(t_k)` were a consistent first-order
//! model, combining it with `D^α y = t^(1-α) y'` and the classical forward
//! difference forces `α h^(1-α) = t_k^(1-α)`, i.e. the *implied alpha*
//!
//! ```text
//! k^(1-α)             if t0 = 0
//! (t0/h + k)^(1-α)    otherwise
//! ```
//!
//! must equal `α`. For `α < 1` it depends on `k` (and on `h` once `t0 > 0`),
//! which is what [`implied_alpha`] and [`ratio_sweep`] expose. The rest of
//! the module measures the same thing empirically through error norms and
//! observed orders under grid halving.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::expr::Expr;
use crate::ivp::{fractional_power, Alpha, Trajectory, UniformGrid};
use crate::oracle::catalog::NamedProblem;
use crate::oracle::{reference_on_grid, REFERENCE_REFINEMENT};
use crate::schemes::{solve, SchemeKind};
use crate::{Error, Result};

/// Observed orders must land here for a study to count as converging.
pub const ORDER_WINDOW: (f64, f64) = (0.75, 1.25);

pub fn implied_alpha(alpha: Alpha, t0: f64, k: u64, h: f64) -> f64 {
    let exponent = 1.0 - alpha.get();
    if t0 == 0.0 {
        libm::pow(k as f64, exponent)
    } else {
        libm::pow(t0 / h + k as f64, exponent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioVerdict {
    /// Every implied alpha equals α (only at α = 1).
    Consistent,
    /// `t0 = 0`: constant in h but a function of k.
    KDependent,
    /// Grows by at least a factor 2 per decade of h.
    UnboundedGrowth,
    Inconclusive,
}

impl RatioVerdict {
    pub fn name(self) -> &'static str {
        match self {
            RatioVerdict::Consistent => "consistent",
            RatioVerdict::KDependent => "k-dependent",
            RatioVerdict::UnboundedGrowth => "unbounded-growth",
            RatioVerdict::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for RatioVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioDiagnostic {
    pub alpha: Alpha,
    pub t0: f64,
    pub k: u64,
    /// `(h, implied_alpha)` in the order given.
    pub entries: Vec<(f64, f64)>,
    pub verdict: RatioVerdict,
}

/// Evaluates [`implied_alpha`] along a decreasing sequence of step sizes with
/// `t0` and `k` held fixed.
pub fn ratio_sweep(alpha: Alpha, t0: f64, k: u64, h_values: &[f64]) -> Result<RatioDiagnostic> {
    if !(t0.is_finite() && t0 >= 0.0) {
        return Err(Error::InvalidParameter(alloc::format!("t0 must be finite and >= 0, got {t0}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if h_values.is_empty() || h_values.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Error::InvalidParameter("step sizes must be positive and finite".into()));
    }
    if h_values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidParameter("step sizes must be strictly decreasing".into()));
    }
    let entries: Vec<(f64, f64)> = h_values
        .iter()
        .map(|&h| (h, implied_alpha(alpha, t0, k, h)))
        .collect();

    let grows = entries.len() >= 2
        && entries.windows(2).all(|w| {
            let decades = libm::log10(w[0].0 / w[1].0);
            w[1].1 >= w[0].1 * libm::pow(2.0, decades)
        });
    let verdict = if entries.iter().all(|&(_, v)| v == alpha.get()) {
        RatioVerdict::Consistent
    } else if t0 == 0.0 {
        RatioVerdict::KDependent
    } else if grows {
        RatioVerdict::UnboundedGrowth
    } else {
        RatioVerdict::Inconclusive
    };
    Ok(RatioDiagnostic {
        alpha,
        t0,
        k,
        entries,
        verdict,
    })
}

/// `d_k = α (y_{k+1} - y_k) / (t_{k+1}^α - t_k^α)` for each computed step.
pub fn discrete_cfd(traj: &Trajectory, alpha: Alpha) -> Result<Vec<f64>> {
    let ys = traj.values();
    if ys.len() < 2 {
        return Err(Error::InvalidParameter(
            "discrete derivative needs at least two samples".into(),
        ));
    }
    let grid = traj.grid();
    Ok(ys
        .windows(2)
        .enumerate()
        .map(|(k, w)| {
            let t_k = grid.node_unchecked(k);
            let t_next = grid.node_unchecked(k + 1);
            let denom = fractional_power(t_next, alpha) - fractional_power(t_k, alpha);
            alpha.get() * (w[1] - w[0]) / denom
        })
        .collect())
}

/// Samples a function of `t` on every grid node.
pub fn sample_exact(exact: &Expr, grid: &UniformGrid) -> Trajectory {
    let values = grid.nodes().map(|t| exact.eval(t, 0.0)).collect();
    Trajectory::from_samples(*grid, values).expect("one sample per node")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub final_abs_err: f64,
    pub max_abs_err: f64,
}

impl ErrorNorms {
    const DIVERGED: ErrorNorms = ErrorNorms {
        final_abs_err: f64::INFINITY,
        max_abs_err: f64::INFINITY,
    };
}

pub fn error_norms(traj: &Trajectory, exact: &Expr) -> ErrorNorms {
    error_norms_with(traj, |_, t| exact.eval(t, 0.0))
}

/// Error norms against `truth(k, t_k)`. Divergent trajectories report infinity.
pub fn error_norms_with(traj: &Trajectory, truth: impl Fn(usize, f64) -> f64) -> ErrorNorms {
    if traj.is_diverged() {
        return ErrorNorms::DIVERGED;
    }
    let mut max_abs_err = 0.0f64;
    let mut final_abs_err = 0.0;
    for (k, (t, y)) in traj.points().enumerate() {
        let err = (y - truth(k, t)).abs();
        if err > max_abs_err || err.is_nan() {
            max_abs_err = err;
        }
        final_abs_err = err;
    }
    ErrorNorms {
        final_abs_err,
        max_abs_err,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    NonConverging,
    Diverged,
    /// Errors shrink, but at an order outside [`ORDER_WINDOW`].
    Indeterminate,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Converging => "converging",
            Verdict::NonConverging => "non-converging",
            Verdict::Diverged => "diverged",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_steps: usize,
    pub h: f64,
    pub final_abs_err: f64,
    pub max_abs_err: f64,
    pub diverged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scheme: SchemeKind,
    pub problem: String,
    pub alpha: Alpha,
    /// Finest grid last; each `h` is half the previous one.
    pub rows: Vec<ConvergenceRow>,
    /// `log2(e_j / e_{j+1})` on final errors, `None` where either error is
    /// zero or non-finite.
    pub orders: Vec<Option<f64>>,
    pub verdict: Verdict,
}

impl ConvergenceReport {
    pub fn final_errors(&self) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().map(|r| r.final_abs_err)
    }
}

pub fn observed_order(coarse_err: f64, fine_err: f64) -> Option<f64> {
    let usable = |e: f64| e.is_finite() && e > 0.0;
    (usable(coarse_err) && usable(fine_err)).then(|| libm::log2(coarse_err / fine_err))
}

/// Diverged if any level diverged; converging if the last two orders fall in
/// [`ORDER_WINDOW`]; non-converging if the final error does not strictly
/// decrease over the last three levels; otherwise indeterminate.
pub fn classify(rows: &[ConvergenceRow], orders: &[Option<f64>]) -> Verdict {
    if rows.iter().any(|r| r.diverged) {
        return Verdict::Diverged;
    }
    let in_window = |o: &Option<f64>| o.is_some_and(|o| o >= ORDER_WINDOW.0 && o <= ORDER_WINDOW.1);
    if orders.len() >= 2 && orders[orders.len() - 2..].iter().all(in_window) {
        return Verdict::Converging;
    }
    let tail = &rows[rows.len().saturating_sub(3)..];
    let decreasing = tail.windows(2).all(|w| w[1].final_abs_err < w[0].final_abs_err);
    if decreasing {
        Verdict::Indeterminate
    } else {
        Verdict::NonConverging
    }
}

/// Solves on `N = n0 · 2^j` steps for `j = 0..levels` and compares against
/// the exact solution, or against the s-domain reference solution on the
/// finest grid when no exact form is known.
pub fn convergence_study(
    named: &NamedProblem,
    scheme: SchemeKind,
    n0: usize,
    levels: usize,
) -> Result<ConvergenceReport> {
    if levels < 3 {
        return Err(Error::InvalidParameter(alloc::format!(
            "a convergence study needs at least 3 levels, got {levels}"
        )));
    }
    if n0 == 0 {
        return Err(Error::ZeroSteps);
    }
    let problem = &named.problem;
    let n_max = 1usize
        .checked_shl((levels - 1) as u32)
        .filter(|_| levels < usize::BITS as usize)
        .and_then(|scale| n0.checked_mul(scale))
        .ok_or_else(|| Error::InvalidParameter("too many refinement levels".into()))?;

    let reference = match problem.exact() {
        Some(_) => None,
        None => {
            let fine = problem.grid(n_max)?;
            let r = reference_on_grid(problem.rhs(), &fine, problem.y0(), problem.alpha(), REFERENCE_REFINEMENT);
            if r.is_diverged() {
                return Err(Error::InvalidParameter(
                    "reference solution diverged; no truth to compare against".into(),
                ));
            }
            Some(r)
        }
    };

    let mut rows = Vec::with_capacity(levels);
    for level in 0..levels {
        let n = n0 << level;
        let grid = problem.grid(n)?;
        let traj = solve(problem, &grid, scheme)?;
        let stride = n_max / n;
        let norms = match (&reference, problem.exact()) {
            (Some(r), _) => error_norms_with(&traj, |k, _| r.values()[k * stride]),
            (None, Some(exact)) => error_norms(&traj, exact),
            (None, None) => unreachable!(),
        };
        rows.push(ConvergenceRow {
            n_steps: n,
            h: grid.h(),
            final_abs_err: norms.final_abs_err,
            max_abs_err: norms.max_abs_err,
            diverged: traj.is_diverged(),
        });
    }
    let orders: Vec<Option<f64>> = rows
        .windows(2)
        .map(|w| observed_order(w[0].final_abs_err, w[1].final_abs_err))
        .collect();
    let verdict = classify(&rows, &orders);
    Ok(ConvergenceReport {
        scheme,
        problem: named.name().into(),
        alpha: problem.alpha(),
        rows,
        orders,
        verdict,
    })
}
