//! Explicit one-step schemes for `D^α y = f(t, y)`.
//!
//! Every scheme here has the form `y_{k+1} = y_k + c_k · f(t_k, y_k)` and
//! differs only in the increment coefficient `c_k`:
//!
//! | scheme                       | `c_k`                          |
//! |------------------------------|--------------------------------|
//! | conformable Euler            | `h^α / α`                      |
//! | modified conformable Euler   | `(t_{k+1}^α - t_k^α) / α`      |
//! | classical Euler              | `h`                            |

use core::fmt;
use core::str::FromStr;

use crate::expr::Expr;
use crate::ivp::{fractional_power, Alpha, IvpProblem, Trajectory, UniformGrid};
use crate::{Error, Result};

/// A scalar right-hand side `f(t, y)`.
pub trait Rhs {
    fn eval(&self, t: f64, y: f64) -> f64;
}

impl Rhs for Expr {
    #[inline]
    fn eval(&self, t: f64, y: f64) -> f64 {
        Expr::eval(self, t, y)
    }
}

impl<F: Fn(f64, f64) -> f64> Rhs for F {
    #[inline]
    fn eval(&self, t: f64, y: f64) -> f64 {
        self(t, y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    ConformableEuler,
    ModifiedConformableEuler,
    /// Ignores α.
    ClassicalEuler,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 3] = [
        SchemeKind::ConformableEuler,
        SchemeKind::ModifiedConformableEuler,
        SchemeKind::ClassicalEuler,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::ConformableEuler => "conformable-euler",
            SchemeKind::ModifiedConformableEuler => "modified",
            SchemeKind::ClassicalEuler => "classical",
        }
    }

    /// Multiplier of `f(t_k, y_k)` in the step from `t_k` to `t_next = t_k + h`.
    #[inline]
    pub fn increment_coefficient(self, t_k: f64, t_next: f64, h: f64, alpha: Alpha) -> f64 {
        match self {
            SchemeKind::ConformableEuler => libm::pow(h, alpha.get()) / alpha.get(),
            SchemeKind::ModifiedConformableEuler => {
                (fractional_power(t_next, alpha) - fractional_power(t_k, alpha)) / alpha.get()
            }
            SchemeKind::ClassicalEuler => h,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown scheme {s:?}")))
    }
}

/// `y_k + h^α/α · f(t_k, y_k)`.
pub fn conformable_euler_step<R: Rhs + ?Sized>(t_k: f64, h: f64, y_k: f64, f: &R, alpha: Alpha) -> f64 {
    let c = SchemeKind::ConformableEuler.increment_coefficient(t_k, t_k + h, h, alpha);
    y_k + c * f.eval(t_k, y_k)
}

/// `y_k + (t_next^α - t_k^α)/α · f(t_k, y_k)`, for `0 ≤ t_k < t_next`.
pub fn modified_euler_step<R: Rhs + ?Sized>(
    t_k: f64,
    t_next: f64,
    y_k: f64,
    f: &R,
    alpha: Alpha,
) -> f64 {
    debug_assert!(0.0 <= t_k && t_k < t_next);
    let c = SchemeKind::ModifiedConformableEuler.increment_coefficient(t_k, t_next, t_next - t_k, alpha);
    y_k + c * f.eval(t_k, y_k)
}

/// `y_k + h · f(t_k, y_k)`.
pub fn classical_euler_step<R: Rhs + ?Sized>(t_k: f64, h: f64, y_k: f64, f: &R) -> f64 {
    y_k + h * f.eval(t_k, y_k)
}

/// Runs `scheme` over every step of `grid`, evaluating `f` only at left nodes.
///
/// Stops at the first value that is non-finite or exceeds the divergence
/// threshold, returning the partial trajectory.
pub fn integrate<R: Rhs + ?Sized>(
    f: &R,
    grid: &UniformGrid,
    y0: f64,
    alpha: Alpha,
    scheme: SchemeKind,
) -> Trajectory {
    let h = grid.h();
    let mut traj = Trajectory::start(*grid, y0);
    let mut y = y0;
    let mut t = grid.node_unchecked(0);
    for k in 0..grid.n_steps() {
        let t_next = grid.node_unchecked(k + 1);
        let c = scheme.increment_coefficient(t, t_next, h, alpha);
        y += c * f.eval(t, y);
        if !traj.push(y) {
            break;
        }
        t = t_next;
    }
    traj
}

pub fn solve(problem: &IvpProblem, grid: &UniformGrid, scheme: SchemeKind) -> Result<Trajectory> {
    if !grid.spans(problem) {
        return Err(Error::GridMismatch {
            grid_start: grid.t0(),
            grid_end: grid.t_end(),
            a: problem.t_start(),
            b: problem.t_end(),
        });
    }
    Ok(integrate(problem.rhs(), grid, problem.y0(), problem.alpha(), scheme))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ivp::make_grid;
    use alloc::vec::Vec;
    use core::cell::RefCell;
    use proptest::prelude::*;

    fn alpha(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    fn problem(rhs: &str, a: f64, b: f64, y0: f64, al: f64) -> IvpProblem {
        IvpProblem::new(Expr::parse(rhs).unwrap(), a, b, y0, alpha(al), None).unwrap()
    }

    fn max_diff(x: &Trajectory, y: &Trajectory) -> f64 {
        assert_eq!(x.values().len(), y.values().len());
        x.values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    // absolute below magnitude one, relative above
    fn max_scaled_diff(x: &Trajectory, y: &Trajectory) -> f64 {
        assert_eq!(x.values().len(), y.values().len());
        x.values()
            .iter()
            .zip(y.values())
            .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
            .fold(0.0, f64::max)
    }

    #[test]
    fn conformable_step_examples() {
        let one = |_: f64, _: f64| 1.0;
        // 1 + 2·sqrt(0.04)
        assert!((conformable_euler_step(0.0, 0.04, 1.0, &one, alpha(0.5)) - 1.4).abs() < 1e-15);
        let ident = |_: f64, y: f64| y;
        assert_eq!(conformable_euler_step(0.0, 0.1, 1.0, &ident, Alpha::ONE), 1.1);
        let zero = |_: f64, _: f64| 0.0;
        assert_eq!(conformable_euler_step(0.7, 0.3, -2.5, &zero, alpha(0.2)), -2.5);
    }

    #[test]
    fn modified_step_examples() {
        let ident = |_: f64, y: f64| y;
        assert_eq!(modified_euler_step(0.0, 0.25, 1.0, &ident, alpha(0.5)), 2.0);
        let m = modified_euler_step(0.3, 0.4, 2.0, &ident, Alpha::ONE);
        let c = classical_euler_step(0.3, 0.1, 2.0, &ident);
        assert!((m - 2.2).abs() < 1e-12 && (m - c).abs() < 1e-12);
        let zero = |_: f64, _: f64| 0.0;
        assert_eq!(modified_euler_step(0.0, 0.5, 3.0, &zero, alpha(0.3)), 3.0);
    }

    #[test]
    fn single_modified_solve() {
        let p = problem("y", 0.0, 0.25, 1.0, 0.5);
        let traj = solve(&p, &p.grid(1).unwrap(), SchemeKind::ModifiedConformableEuler).unwrap();
        assert_eq!(traj.values(), &[1.0, 2.0]);
    }

    #[test]
    fn classical_matches_modified_at_unit_order() {
        let p = problem("y", 0.0, 1.0, 1.0, 1.0);
        let g = p.grid(16).unwrap();
        let c = solve(&p, &g, SchemeKind::ClassicalEuler).unwrap();
        let m = solve(&p, &g, SchemeKind::ModifiedConformableEuler).unwrap();
        assert!(max_diff(&c, &m) < 1e-12);
    }

    #[test]
    fn conformable_euler_blows_up_at_half_order() {
        let p = problem("y", 0.0, 1.0, 1.0, 0.5);
        let traj = solve(&p, &p.grid(100).unwrap(), SchemeKind::ConformableEuler).unwrap();
        // y_N = (1 + 2 sqrt(h))^N with h = 0.01
        let closed = libm::pow(1.2, 100.0);
        assert!(!traj.is_diverged());
        assert!((traj.last() - closed).abs() <= 1e-12 * closed);
        assert!(traj.last() > 8.28e7 && traj.last() < 8.29e7);
    }

    #[test]
    fn divergence_truncates() {
        let p = problem("y^2", 0.0, 1.0, 1.0, 0.5);
        let traj = solve(&p, &p.grid(200).unwrap(), SchemeKind::ConformableEuler).unwrap();
        let k = traj.diverged_at().unwrap();
        assert_eq!(traj.values().len(), k + 1);
        assert!(!(traj.values()[k].abs() <= 1e300));
        assert!(traj.values()[..k].iter().all(|y| y.is_finite() && y.abs() <= 1e300));
    }

    #[test]
    fn grid_mismatch_is_rejected() {
        let p = problem("y", 0.0, 1.0, 1.0, 0.5);
        let g = make_grid(0.0, 2.0, 10).unwrap();
        assert!(matches!(
            solve(&p, &g, SchemeKind::ModifiedConformableEuler),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn rhs_only_sees_left_nodes() {
        let grid = make_grid(0.0, 1.0, 32).unwrap();
        for scheme in SchemeKind::ALL {
            let seen = RefCell::new(Vec::new());
            let f = |t: f64, y: f64| {
                seen.borrow_mut().push(t);
                -y + t
            };
            integrate(&f, &grid, 1.0, alpha(0.6), scheme);
            let expected: Vec<f64> = grid.nodes().take(32).collect();
            assert_eq!(*seen.borrow(), expected, "{scheme}");
        }
    }

    #[test]
    fn modified_coefficients_decrease_for_fractional_order() {
        for al in [0.1, 0.3, 0.5, 0.8, 0.99] {
            for (a, b, n) in [(0.0, 1.0, 64), (0.5, 3.0, 100), (0.0, 10.0, 1000)] {
                let g = make_grid(a, b, n).unwrap();
                let coef: Vec<f64> = (0..n)
                    .map(|k| {
                        let (t0, t1) = (g.node(k).unwrap(), g.node(k + 1).unwrap());
                        SchemeKind::ModifiedConformableEuler.increment_coefficient(t0, t1, g.h(), alpha(al))
                    })
                    .collect();
                assert!(coef.windows(2).all(|w| w[1] < w[0]), "alpha={al} [{a},{b}] n={n}");
            }
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in SchemeKind::ALL {
            assert_eq!(s.name().parse::<SchemeKind>().unwrap(), s);
        }
        assert!("euler".parse::<SchemeKind>().is_err());
    }

    proptest! {
        #[test]
        fn unit_order_reduces_to_classical(
            lambda in -3.0f64..3.0, a in 0.0f64..2.0, len in 0.1f64..3.0, n in 1usize..200, y0 in -5.0f64..5.0,
        ) {
            let f = move |t: f64, y: f64| lambda * y + libm::sin(t);
            let g = make_grid(a, a + len, n).unwrap();
            let classical = integrate(&f, &g, y0, Alpha::ONE, SchemeKind::ClassicalEuler);
            for s in [SchemeKind::ConformableEuler, SchemeKind::ModifiedConformableEuler] {
                let other = integrate(&f, &g, y0, Alpha::ONE, s);
                prop_assert!(max_scaled_diff(&classical, &other) < 1e-12);
            }
        }

        #[test]
        fn increment_is_linear_in_rhs_value(
            t in 0.0f64..5.0, h in 1e-4f64..0.5, y in -10.0f64..10.0,
            fv in -100.0f64..100.0, scale in -8.0f64..8.0, al in 0.05f64..=1.0,
        ) {
            let alpha = alpha(al);
            let base = |_: f64, _: f64| fv;
            let scaled = |_: f64, _: f64| scale * fv;
            let steps: [(f64, f64); 3] = [
                (conformable_euler_step(t, h, y, &base, alpha) - y,
                 conformable_euler_step(t, h, y, &scaled, alpha) - y),
                (modified_euler_step(t, t + h, y, &base, alpha) - y,
                 modified_euler_step(t, t + h, y, &scaled, alpha) - y),
                (classical_euler_step(t, h, y, &base) - y,
                 classical_euler_step(t, h, y, &scaled) - y),
            ];
            for (d1, d2) in steps {
                // increments pass through y + c·f - y, so compare at the scale of y
                let ulp = f64::EPSILON * (y.abs() + d2.abs()).max(f64::MIN_POSITIVE);
                prop_assert!((d2 - scale * d1).abs() <= 4.0 * ulp * (1.0 + scale.abs()),
                    "{} vs {}", d2, scale * d1);
            }
        }
    }
}
