//! Ground truth that does not go through the Euler-type schemes.
//!
//! Because `D^α y(t) = t^(1-α) y'(t)` for differentiable `y`, the substitution
//! `s = t^α / α` (so `ds/dt = t^(α-1)`) turns `D^α y = f(t, y)` into the
//! ordinary problem `dy/ds = f(t(s), y)` with `t(s) = (α s)^(1/α)`. Unlike the
//! naive `y' = t^(α-1) f`, this form has no singularity at `t = 0`, and a
//! classical fourth-order integrator in `s` gives a reference solution with
//! errors far below those of the first-order schemes.

pub mod catalog;

use crate::expr::Expr;
use crate::ivp::{fractional_power, Alpha, IvpProblem, Trajectory, UniformGrid};
use crate::schemes::Rhs;
use crate::{Error, Result};

/// Default `ε` for limit-definition checks.
pub const DEFAULT_EPS: f64 = 1e-7;

/// Internal substeps per output interval used by the convergence studies.
pub const REFERENCE_REFINEMENT: usize = 1024;

/// `s = t^α / α`.
#[inline]
pub fn s_of_t(t: f64, alpha: Alpha) -> f64 {
    fractional_power(t, alpha) / alpha.get()
}

/// `t = (α s)^(1/α)`, the inverse of [`s_of_t`].
#[inline]
pub fn t_of_s(s: f64, alpha: Alpha) -> f64 {
    let base = alpha.get() * s;
    if base <= 0.0 {
        0.0
    } else {
        libm::pow(base, 1.0 / alpha.get())
    }
}

/// The right-hand side `g(s, y) = f(t(s), y)` of the problem in the `s` variable.
#[derive(Debug, Clone, Copy)]
pub struct SDomainRhs<'a, R: ?Sized> {
    f: &'a R,
    alpha: Alpha,
}

impl<R: Rhs + ?Sized> Rhs for SDomainRhs<'_, R> {
    #[inline]
    fn eval(&self, s: f64, y: f64) -> f64 {
        self.f.eval(t_of_s(s, self.alpha), y)
    }
}

pub fn transform_rhs<R: Rhs + ?Sized>(f: &R, alpha: Alpha) -> SDomainRhs<'_, R> {
    SDomainRhs { f, alpha }
}

#[inline]
fn rk4_step<R: Rhs + ?Sized>(g: &R, s: f64, ds: f64, y: f64) -> f64 {
    let half = 0.5 * ds;
    let k1 = g.eval(s, y);
    let k2 = g.eval(s + half, y + half * k1);
    let k3 = g.eval(s + half, y + half * k2);
    let k4 = g.eval(s + ds, y + ds * k3);
    y + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

/// Reference solution on the uniform `t`-grid with `n_output` steps.
///
/// Each output interval `[t_k, t_{k+1}]` maps to `[s(t_k), s(t_{k+1})]`, which
/// is covered by `refinement` uniform RK4 steps in `s`, so reported values sit
/// exactly on the requested nodes without interpolation.
pub fn reference_solve(problem: &IvpProblem, n_output: usize, refinement: usize) -> Result<Trajectory> {
    if refinement == 0 {
        return Err(Error::InvalidParameter("refinement must be at least 1".into()));
    }
    let grid = problem.grid(n_output)?;
    Ok(reference_on_grid(problem.rhs(), &grid, problem.y0(), problem.alpha(), refinement))
}

pub fn reference_on_grid<R: Rhs + ?Sized>(
    f: &R,
    grid: &UniformGrid,
    y0: f64,
    alpha: Alpha,
    refinement: usize,
) -> Trajectory {
    let g = transform_rhs(f, alpha);
    let mut traj = Trajectory::start(*grid, y0);
    let mut y = y0;
    let mut s_left = s_of_t(grid.node_unchecked(0), alpha);
    for k in 0..grid.n_steps() {
        let s_right = s_of_t(grid.node_unchecked(k + 1), alpha);
        let ds = (s_right - s_left) / refinement as f64;
        for j in 0..refinement {
            y = rk4_step(&g, s_left + j as f64 * ds, ds, y);
        }
        if !traj.push(y) {
            break;
        }
        s_left = s_right;
    }
    traj
}

/// `(f(t + ε t^(1-α)) - f(t)) / ε`, the quotient whose `ε → 0` limit defines
/// the conformable derivative. Requires `t > 0`.
pub fn cfd_limit_estimate<F: Fn(f64) -> f64>(f: F, t: f64, alpha: Alpha, eps: f64) -> f64 {
    debug_assert!(t > 0.0 && eps > 0.0);
    let shift = eps * libm::pow(t, 1.0 - alpha.get());
    (f(t + shift) - f(t)) / eps
}

/// `|D^α exact(t) - f(t, exact(t))|` with the derivative taken from the limit quotient.
pub fn cfd_residual<R: Rhs + ?Sized>(exact: &Expr, f: &R, alpha: Alpha, t: f64, eps: f64) -> f64 {
    let y = |t: f64| exact.eval(t, 0.0);
    let estimate = cfd_limit_estimate(y, t, alpha, eps);
    (estimate - f.eval(t, y(t))).abs()
}

/// Maximum residual of the problem's exact solution at ten evenly staggered
/// interior points, or `None` when no exact solution is known.
pub fn certify(problem: &IvpProblem, eps: f64) -> Option<f64> {
    let exact = problem.exact()?;
    let (a, b) = (problem.t_start(), problem.t_end());
    let worst = (0..10)
        .map(|j| a + (b - a) * (j as f64 + 0.5) / 10.0)
        .map(|t| cfd_residual(exact, problem.rhs(), problem.alpha(), t, eps))
        .fold(0.0, |acc: f64, r| if r > acc || r.is_nan() { r } else { acc });
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivp::make_grid;
    use crate::schemes::{integrate, SchemeKind};
    use alloc::vec::Vec;

    fn alpha(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    fn expr(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(t_of_s(1.0, alpha(0.5)), 0.25);
        for s in [0.0, 0.3, 1.7] {
            assert_eq!(t_of_s(s, Alpha::ONE), s);
            assert_eq!(s_of_t(s, Alpha::ONE), s);
        }
        let ident = |_: f64, y: f64| y;
        let g = transform_rhs(&ident, alpha(0.3));
        assert_eq!(g.eval(2.0, 1.5), 1.5);
        let f = |t: f64, y: f64| t * y;
        let g = transform_rhs(&f, Alpha::ONE);
        assert_eq!(g.eval(0.7, 3.0), f(0.7, 3.0));
        for al in [0.2, 0.5, 0.9] {
            for t in [0.01, 0.5, 2.0] {
                let back = t_of_s(s_of_t(t, alpha(al)), alpha(al));
                assert!((back - t).abs() <= 1e-14 * t);
            }
        }
    }

    #[test]
    fn reference_on_exponential() {
        let p = IvpProblem::new(expr("y"), 0.0, 1.0, 1.0, Alpha::ONE, None).unwrap();
        let traj = reference_solve(&p, 1, 1024).unwrap();
        assert!((traj.last() - core::f64::consts::E).abs() < 1e-9);

        let p = IvpProblem::new(expr("y"), 0.0, 1.0, 1.0, alpha(0.5), None).unwrap();
        let traj = reference_solve(&p, 10, 1024).unwrap();
        // exp(2 sqrt(1))
        assert!((traj.last() - 7.38905609893065).abs() < 1e-8);
    }

    #[test]
    fn reference_zero_field_is_constant() {
        let p = IvpProblem::new(expr("0"), 0.5, 2.0, -3.25, alpha(0.4), None).unwrap();
        let traj = reference_solve(&p, 7, 3).unwrap();
        assert!(traj.values().iter().all(|&y| y == -3.25));
        assert_eq!(traj.values().len(), 8);
        assert!(reference_solve(&p, 7, 0).is_err());
    }

    // plain RK4 in t, written out independently
    fn rk4_in_t(f: impl Fn(f64, f64) -> f64, a: f64, b: f64, n: usize, m: usize, y0: f64) -> Vec<f64> {
        let grid = make_grid(a, b, n).unwrap();
        let mut out = Vec::from([y0]);
        let mut y = y0;
        for k in 0..n {
            let t0 = grid.node(k).unwrap();
            let dt = (grid.node(k + 1).unwrap() - t0) / m as f64;
            for j in 0..m {
                let t = t0 + j as f64 * dt;
                let half = 0.5 * dt;
                let k1 = f(t, y);
                let k2 = f(t + half, y + half * k1);
                let k3 = f(t + half, y + half * k2);
                let k4 = f(t + dt, y + dt * k3);
                y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            out.push(y);
        }
        out
    }

    #[test]
    fn unit_order_substitution_is_exact() {
        let p = IvpProblem::new(expr("sin(t) * y - t"), 0.2, 1.7, 0.9, Alpha::ONE, None).unwrap();
        let ours = reference_solve(&p, 12, 16).unwrap();
        let direct = rk4_in_t(|t, y| libm::sin(t) * y - t, 0.2, 1.7, 12, 16, 0.9);
        assert_eq!(ours.values(), direct.as_slice());
    }

    #[test]
    fn reference_beats_euler_by_orders_of_magnitude() {
        let p = IvpProblem::new(expr("-2*y + t"), 0.0, 1.0, 1.0, alpha(0.7), None).unwrap();
        let coarse = reference_solve(&p, 8, 64).unwrap();
        let fine = reference_solve(&p, 8, 1024).unwrap();
        let euler = integrate(p.rhs(), &p.grid(8).unwrap(), 1.0, p.alpha(), SchemeKind::ModifiedConformableEuler);
        let ref_err = (coarse.last() - fine.last()).abs();
        let euler_err = (euler.last() - fine.last()).abs();
        assert!(ref_err * 1e4 < euler_err, "{ref_err} vs {euler_err}");
    }

    #[test]
    fn limit_estimate_examples() {
        let sq = |t: f64| t * t;
        let est = cfd_limit_estimate(sq, 1.0, alpha(0.5), 1e-6);
        assert!((est - 2.000001).abs() < 1e-8, "{est}");
        assert_eq!(cfd_limit_estimate(|_| 4.2, 0.7, alpha(0.3), 1e-7), 0.0);
        let (t, eps) = (1.3, 1e-4);
        let fwd = (sq(t + eps) - sq(t)) / eps;
        assert_eq!(cfd_limit_estimate(sq, t, Alpha::ONE, eps), fwd);
    }

    #[test]
    fn limit_estimate_approaches_identity() {
        // f = sin, f' = cos; f = exp(t)*t, f' = exp(t)*(1+t)
        type F = fn(f64) -> f64;
        let cases: [(F, F); 2] = [
            (libm::sin, libm::cos),
            (|t| libm::exp(t) * t, |t| libm::exp(t) * (1.0 + t)),
        ];
        for (f, df) in cases {
            for al in [0.2, 0.5, 0.9] {
                for t in [0.3, 1.0, 2.5] {
                    let target = libm::pow(t, 1.0 - al) * df(t);
                    let errs: Vec<f64> = [1e-3, 1e-5, 1e-7]
                        .iter()
                        .map(|&eps| (cfd_limit_estimate(f, t, alpha(al), eps) - target).abs())
                        .collect();
                    assert!(errs[1] < errs[0] && errs[2] < errs[1], "{errs:?}");
                }
            }
        }
    }

    #[test]
    fn residual_examples() {
        let r = cfd_residual(&expr("exp(2*sqrt(t))"), &expr("y"), alpha(0.5), 1.0, 1e-7);
        assert!(r < 1e-5, "{r}");
        let r = cfd_residual(&expr("t^2"), &expr("2*t^(2 - 0.5)"), alpha(0.5), 1.0, 1e-7);
        assert!(r < 1e-5, "{r}");
        let r = cfd_residual(&expr("3.5"), &expr("0"), alpha(0.5), 1.0, 1e-7);
        assert_eq!(r, 0.0);
        // exp(t) solves y' = y, not D^0.5 y = y: residual is (1 - sqrt(t)) e^t
        let r = cfd_residual(&expr("exp(t)"), &expr("y"), alpha(0.5), 0.25, 1e-7);
        assert!((r - 0.5 * libm::exp(0.25)).abs() < 1e-5, "{r}");
    }
}
