//! Problem, grid and trajectory types shared by the schemes and the oracles.

use alloc::vec::Vec;

use crate::expr::Expr;
use crate::{Error, Result};

/// Magnitude past which a trajectory is declared divergent.
pub const DIVERGENCE_THRESHOLD: f64 = 1e300;

/// Fractional order, guaranteed to lie in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Alpha(f64);

impl Alpha {
    pub const ONE: Alpha = Alpha(1.0);
    pub const ONE_HALF: Alpha = Alpha(0.5);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Alpha(value))
        } else {
            Err(Error::InvalidAlpha(value))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        self.0 == 1.0
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

/// `t^α` for `t ≥ 0`, with `0^α = 0` exactly.
///
/// Uses a correctly special-cased `pow`, so `t^1 = t` bit for bit.
#[inline]
pub fn fractional_power(t: f64, alpha: Alpha) -> f64 {
    if t == 0.0 {
        0.0
    } else {
        libm::pow(t, alpha.get())
    }
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a >= 0.0 && a < b {
        Ok(())
    } else {
        Err(Error::InvalidInterval { a, b })
    }
}

/// `D^α y = f(t, y)`, `y(a) = y0` on `[a, b]`, optionally with a closed-form solution.
#[derive(Debug, Clone, PartialEq)]
pub struct IvpProblem {
    rhs: Expr,
    t_start: f64,
    t_end: f64,
    y0: f64,
    alpha: Alpha,
    exact: Option<Expr>,
}

impl IvpProblem {
    /// Validates the interval and, when given, that `exact(a)` reproduces `y0`
    /// to `1e-12` relative (absolute below magnitude one).
    pub fn new(
        rhs: Expr,
        t_start: f64,
        t_end: f64,
        y0: f64,
        alpha: Alpha,
        exact: Option<Expr>,
    ) -> Result<Self> {
        check_interval(t_start, t_end)?;
        if !y0.is_finite() {
            return Err(Error::NonFiniteInitialValue(y0));
        }
        if let Some(exact) = &exact {
            if exact.depends_on_y() {
                return Err(Error::ExactDependsOnY);
            }
            let found = exact.eval(t_start, y0);
            let tol = 1e-12 * libm::fmax(y0.abs(), 1.0);
            if !((found - y0).abs() <= tol) {
                return Err(Error::ExactMismatch {
                    t: t_start,
                    expected: y0,
                    found,
                });
            }
        }
        Ok(IvpProblem {
            rhs,
            t_start,
            t_end,
            y0,
            alpha,
            exact,
        })
    }

    pub fn rhs(&self) -> &Expr {
        &self.rhs
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y0(&self) -> f64 {
        self.y0
    }

    pub fn alpha(&self) -> Alpha {
        self.alpha
    }

    pub fn exact(&self) -> Option<&Expr> {
        self.exact.as_ref()
    }

    /// Uniform grid with `n_steps` steps over the problem interval.
    pub fn grid(&self, n_steps: usize) -> Result<UniformGrid> {
        UniformGrid::new(self.t_start, self.t_end, n_steps)
    }
}

/// Nodes `t_k = t0 + k·h`, `0 ≤ k ≤ N`. The last node is the interval end
/// exactly rather than the rounded `t0 + N·h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    t0: f64,
    t_end: f64,
    h: f64,
    n_steps: usize,
}

impl UniformGrid {
    pub fn new(a: f64, b: f64, n_steps: usize) -> Result<Self> {
        check_interval(a, b)?;
        if n_steps == 0 {
            return Err(Error::ZeroSteps);
        }
        Ok(UniformGrid {
            t0: a,
            t_end: b,
            h: (b - a) / n_steps as f64,
            n_steps,
        })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, k: usize) -> Result<f64> {
        if k > self.n_steps {
            return Err(Error::NodeOutOfRange {
                index: k,
                n_steps: self.n_steps,
            });
        }
        Ok(self.node_unchecked(k))
    }

    #[inline]
    pub(crate) fn node_unchecked(&self, k: usize) -> f64 {
        if k == self.n_steps {
            self.t_end
        } else {
            self.t0 + k as f64 * self.h
        }
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_steps + 1).map(|k| self.node_unchecked(k))
    }

    /// Same interval, twice the steps.
    pub fn refined(&self) -> Self {
        UniformGrid {
            t0: self.t0,
            t_end: self.t_end,
            h: self.h / 2.0,
            n_steps: self.n_steps * 2,
        }
    }

    pub fn spans(&self, problem: &IvpProblem) -> bool {
        let tol = 1e-12 * (problem.t_end - problem.t_start);
        (self.t0 - problem.t_start).abs() <= tol && (self.t_end() - problem.t_end).abs() <= tol
    }
}

/// Make a grid over `[a, b]` with `n_steps` uniform steps.
pub fn make_grid(a: f64, b: f64, n_steps: usize) -> Result<UniformGrid> {
    UniformGrid::new(a, b, n_steps)
}

/// Values `y_k` on a grid. A divergent run stops at the first offending index,
/// which is stored as the last value.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: UniformGrid,
    values: Vec<f64>,
    diverged_at: Option<usize>,
}

impl Trajectory {
    /// Wrap a full set of samples (one per node). Divergence is detected the
    /// same way the solvers detect it.
    pub fn from_samples(grid: UniformGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SampleCount {
                expected: grid.len(),
                found: values.len(),
            });
        }
        let mut traj = Trajectory::start(grid, values[0]);
        for &y in &values[1..] {
            if !traj.push(y) {
                break;
            }
        }
        Ok(traj)
    }

    pub(crate) fn start(grid: UniformGrid, y0: f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        values.push(y0);
        Trajectory {
            grid,
            values,
            diverged_at: None,
        }
    }

    /// Appends `y`; returns false once the run has diverged.
    pub(crate) fn push(&mut self, y: f64) -> bool {
        self.values.push(y);
        if is_divergent(y) {
            self.diverged_at = Some(self.values.len() - 1);
            false
        } else {
            true
        }
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn diverged_at(&self) -> Option<usize> {
        self.diverged_at
    }

    pub fn is_diverged(&self) -> bool {
        self.diverged_at.is_some()
    }

    /// `(t_k, y_k)` pairs for the computed nodes.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &y)| (self.grid.node_unchecked(k), y))
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("trajectory always holds y0")
    }
}

#[inline]
pub(crate) fn is_divergent(y: f64) -> bool {
    !(y.abs() <= DIVERGENCE_THRESHOLD)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn alpha_bounds() {
        assert!(Alpha::new(1.0).is_ok());
        assert!(Alpha::new(1e-9).is_ok());
        for bad in [0.0, -0.5, 1.0000001, f64::NAN, f64::INFINITY] {
            assert!(matches!(Alpha::new(bad), Err(Error::InvalidAlpha(_))), "{bad}");
        }
    }

    #[test]
    fn grid_examples() {
        let g = make_grid(0.0, 1.0, 10).unwrap();
        assert_eq!(g.h(), 0.1);
        assert_eq!(g.node(0).unwrap(), 0.0);
        assert_eq!(g.node(5).unwrap(), 0.5);
        assert_eq!(g.node(10).unwrap(), 1.0);

        let g = make_grid(1.0, 2.0, 1).unwrap();
        assert_eq!(g.h(), 1.0);
        assert_eq!(g.nodes().collect::<Vec<_>>(), vec![1.0, 2.0]);

        let g = make_grid(0.0, 1.0, 3).unwrap();
        assert!((g.node(3).unwrap() - 1.0).abs() <= 1e-12);

        assert_eq!(make_grid(1.0, 2.0, 4).unwrap().node(0).unwrap(), 1.0);
        assert_eq!(make_grid(0.5, 1.5, 10).unwrap().node(10).unwrap(), 1.5);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(matches!(make_grid(-0.1, 1.0, 4), Err(Error::InvalidInterval { .. })));
        assert!(matches!(make_grid(1.0, 1.0, 4), Err(Error::InvalidInterval { .. })));
        assert!(matches!(make_grid(2.0, 1.0, 4), Err(Error::InvalidInterval { .. })));
        assert!(matches!(make_grid(0.0, f64::NAN, 4), Err(Error::InvalidInterval { .. })));
        assert_eq!(make_grid(0.0, 1.0, 0), Err(Error::ZeroSteps));
        assert_eq!(
            make_grid(0.0, 1.0, 4).unwrap().node(5),
            Err(Error::NodeOutOfRange { index: 5, n_steps: 4 })
        );
    }

    #[test]
    fn refinement_halves_power_of_two_steps_exactly() {
        for (b, n) in [(1.0, 8), (4.0, 16), (0.5, 2), (2.0, 1024)] {
            let g = make_grid(0.0, b, n).unwrap();
            let fine = make_grid(0.0, b, 2 * n).unwrap();
            assert_eq!(fine.h(), g.h() / 2.0);
            assert_eq!(g.refined(), fine);
        }
    }

    #[test]
    fn problem_validation() {
        let rhs = Expr::parse("y").unwrap();
        let a = Alpha::new(0.5).unwrap();
        let exact = Expr::parse("exp(2*sqrt(t))").unwrap();
        assert!(IvpProblem::new(rhs.clone(), 0.0, 1.0, 1.0, a, Some(exact.clone())).is_ok());
        assert!(matches!(
            IvpProblem::new(rhs.clone(), 0.0, 1.0, 2.0, a, Some(exact)),
            Err(Error::ExactMismatch { .. })
        ));
        assert_eq!(
            IvpProblem::new(rhs.clone(), 0.0, 1.0, 1.0, a, Some(Expr::Y)),
            Err(Error::ExactDependsOnY)
        );
        assert!(matches!(
            IvpProblem::new(rhs.clone(), -1.0, 1.0, 1.0, a, None),
            Err(Error::InvalidInterval { .. })
        ));
        assert!(matches!(
            IvpProblem::new(rhs, 0.0, 1.0, f64::NAN, a, None),
            Err(Error::NonFiniteInitialValue(_))
        ));
    }

    #[test]
    fn from_samples_flags_divergence() {
        let g = make_grid(0.0, 1.0, 4).unwrap();
        let t = Trajectory::from_samples(g, vec![1.0, 2.0, 2e300, 3.0, 4.0]).unwrap();
        assert_eq!(t.diverged_at(), Some(2));
        assert_eq!(t.values(), &[1.0, 2.0, 2e300]);
        let t = Trajectory::from_samples(g, vec![1.0, f64::NAN, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(t.diverged_at(), Some(1));
        assert!(matches!(
            Trajectory::from_samples(g, vec![1.0]),
            Err(Error::SampleCount { expected: 5, found: 1 })
        ));
    }

    #[test]
    fn fractional_power_origin_and_unit_order() {
        let half = Alpha::new(0.5).unwrap();
        assert_eq!(fractional_power(0.0, half), 0.0);
        assert_eq!(fractional_power(0.25, half), 0.5);
        for t in [0.1, 0.3, 0.7, 1.9, 123.456] {
            assert_eq!(fractional_power(t, Alpha::ONE), t);
        }
    }

    proptest! {
        #[test]
        fn nodes_are_spaced_by_h(a in 0.0f64..100.0, len in 1e-3f64..100.0, n in 1usize..5000) {
            let g = make_grid(a, a + len, n).unwrap();
            let ulp = |x: f64| f64::from_bits(x.to_bits() + 1) - x;
            for k in 0..n {
                let (t0, t1) = (g.node(k).unwrap(), g.node(k + 1).unwrap());
                prop_assert!(((t1 - t0) - g.h()).abs() <= 4.0 * ulp(t1));
            }
            prop_assert_eq!(g.t_end(), a + len);
        }
    }
}
