//! Named test problems with closed-form solutions.
//!
//! | name       | `f(t, y)`            | exact `y(t)`                                   |
//! |------------|----------------------|------------------------------------------------|
//! | `linear`   | `λ y`                | `y0 exp(λ (t^α - a^α)/α)`                      |
//! | `power`    | `p t^(p-α)`          | `y0 + t^p - a^p`                               |
//! | `logistic` | `r y (1 - y/K)`      | `K / (1 + C exp(-r (s(t) - s(a))))`, `C = K/y0 - 1` |
//! | `custom`   | user expression      | user expression, if any                        |
//!
//! with `s(t) = t^α/α`. Each exact form can be checked against the limit
//! definition with [`certify`](super::certify).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::expr::Expr;
use crate::ivp::{fractional_power, Alpha, IvpProblem};
use crate::oracle::s_of_t;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Linear,
    Power,
    Logistic,
    Custom,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] = [
        ProblemKind::Linear,
        ProblemKind::Power,
        ProblemKind::Logistic,
        ProblemKind::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Linear => "linear",
            ProblemKind::Power => "power",
            ProblemKind::Logistic => "logistic",
            ProblemKind::Custom => "custom",
        }
    }

    /// `f(t, y)` in readable form, parameters left symbolic.
    pub fn formula(self) -> &'static str {
        match self {
            ProblemKind::Linear => "D^a y = lambda*y",
            ProblemKind::Power => "D^a y = p*t^(p-a)",
            ProblemKind::Logistic => "D^a y = r*y*(1 - y/kcap)",
            ProblemKind::Custom => "D^a y = <--rhs expression>",
        }
    }

    /// Parameter names with their default values.
    pub fn default_parameters(self) -> &'static [(&'static str, f64)] {
        match self {
            ProblemKind::Linear => &[("lambda", 1.0)],
            ProblemKind::Power => &[("p", 2.0)],
            ProblemKind::Logistic => &[("r", 1.0), ("kcap", 2.0)],
            ProblemKind::Custom => &[],
        }
    }

    pub fn default_y0(self) -> f64 {
        match self {
            ProblemKind::Linear | ProblemKind::Custom => 1.0,
            ProblemKind::Power => 0.0,
            ProblemKind::Logistic => 0.5,
        }
    }

    pub fn has_exact(self) -> bool {
        !matches!(self, ProblemKind::Custom)
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown problem {s:?}")))
    }
}

/// A catalog entry: the problem plus the parameter values that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedProblem {
    pub kind: ProblemKind,
    pub parameters: BTreeMap<&'static str, f64>,
    pub problem: IvpProblem,
}

impl NamedProblem {
    pub fn name(&self) -> &'static str {
        self.kind.name()
    }
}

// parenthesized so negative values stay a single operand
fn lit(x: f64) -> String {
    format!("({x})")
}

fn finite(name: &str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {x}")))
    }
}

fn build(
    kind: ProblemKind,
    parameters: &[(&'static str, f64)],
    rhs: &str,
    exact: &str,
    (alpha, a, b, y0): (Alpha, f64, f64, f64),
) -> Result<NamedProblem> {
    let problem = IvpProblem::new(Expr::parse(rhs)?, a, b, y0, alpha, Some(Expr::parse(exact)?))?;
    Ok(NamedProblem {
        kind,
        parameters: parameters.iter().copied().collect(),
        problem,
    })
}

/// `D^α y = λ y`.
pub fn linear(lambda: f64, alpha: Alpha, a: f64, b: f64, y0: f64) -> Result<NamedProblem> {
    finite("lambda", lambda)?;
    let al = alpha.get();
    let rhs = format!("{} * y", lit(lambda));
    let exact = format!(
        "{} * exp({} * (t^{} - {}) / {})",
        lit(y0),
        lit(lambda),
        lit(al),
        lit(fractional_power(a, alpha)),
        lit(al)
    );
    build(ProblemKind::Linear, &[("lambda", lambda)], &rhs, &exact, (alpha, a, b, y0))
}

/// `D^α y = p t^(p-α)`, solved by `y0 + t^p - a^p`. Needs `p > 0`.
pub fn power(p: f64, alpha: Alpha, a: f64, b: f64, y0: f64) -> Result<NamedProblem> {
    if !(finite("p", p)? > 0.0) {
        return Err(Error::InvalidParameter(format!("p must be positive, got {p}")));
    }
    let rhs = format!("{} * t^{}", lit(p), lit(p - alpha.get()));
    let a_pow = if a == 0.0 { 0.0 } else { libm::pow(a, p) };
    let exact = format!("{} + t^{} - {}", lit(y0), lit(p), lit(a_pow));
    build(ProblemKind::Power, &[("p", p)], &rhs, &exact, (alpha, a, b, y0))
}

/// `D^α y = r y (1 - y/K)`. Needs `y0 ≠ 0` and `K ≠ 0`.
pub fn logistic(r: f64, kcap: f64, alpha: Alpha, a: f64, b: f64, y0: f64) -> Result<NamedProblem> {
    finite("r", r)?;
    if finite("kcap", kcap)? == 0.0 {
        return Err(Error::InvalidParameter("kcap must be nonzero".into()));
    }
    if y0 == 0.0 {
        return Err(Error::InvalidParameter("logistic problem needs y0 != 0".into()));
    }
    let al = alpha.get();
    let c = kcap / y0 - 1.0;
    let rhs = format!("{} * y * (1 - y / {})", lit(r), lit(kcap));
    let exact = format!(
        "{} / (1 + {} * exp(-{} * (t^{} / {} - {})))",
        lit(kcap),
        lit(c),
        lit(r),
        lit(al),
        lit(al),
        lit(s_of_t(a, alpha))
    );
    build(
        ProblemKind::Logistic,
        &[("r", r), ("kcap", kcap)],
        &rhs,
        &exact,
        (alpha, a, b, y0),
    )
}

/// User-supplied right-hand side, exact solution optional.
pub fn custom(rhs: Expr, exact: Option<Expr>, alpha: Alpha, a: f64, b: f64, y0: f64) -> Result<NamedProblem> {
    Ok(NamedProblem {
        kind: ProblemKind::Custom,
        parameters: BTreeMap::new(),
        problem: IvpProblem::new(rhs, a, b, y0, alpha, exact)?,
    })
}

/// Builds a catalog problem from its kind and a parameter lookup; missing
/// parameters take their defaults. `custom` gets the zero field.
pub fn with_parameters(
    kind: ProblemKind,
    param: impl Fn(&str) -> Option<f64>,
    alpha: Alpha,
    a: f64,
    b: f64,
    y0: f64,
) -> Result<NamedProblem> {
    let get = |name: &str| {
        param(name).unwrap_or_else(|| {
            kind.default_parameters()
                .iter()
                .find(|(n, _)| *n == name)
                .map_or(f64::NAN, |(_, v)| *v)
        })
    };
    match kind {
        ProblemKind::Linear => linear(get("lambda"), alpha, a, b, y0),
        ProblemKind::Power => power(get("p"), alpha, a, b, y0),
        ProblemKind::Logistic => logistic(get("r"), get("kcap"), alpha, a, b, y0),
        ProblemKind::Custom => custom(Expr::Const(0.0), None, alpha, a, b, y0),
    }
}

/// Every catalog entry with default parameters and initial values.
pub fn catalog_for(alpha: Alpha, a: f64, b: f64) -> Result<Vec<NamedProblem>> {
    ProblemKind::ALL
        .into_iter()
        .map(|kind| with_parameters(kind, |_| None, alpha, a, b, kind.default_y0()))
        .collect()
}

/// Catalog at `α = 0.5` on `[0, 1]`.
pub fn catalog() -> Vec<NamedProblem> {
    catalog_for(Alpha::ONE_HALF, 0.0, 1.0).expect("default catalog parameters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{certify, cfd_residual, reference_solve, DEFAULT_EPS};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alpha(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    fn exact_at(p: &NamedProblem, t: f64) -> f64 {
        p.problem.exact().unwrap().eval(t, 0.0)
    }

    #[test]
    fn catalog_contents() {
        let names: Vec<_> = catalog().iter().map(NamedProblem::name).collect();
        assert_eq!(names, ["linear", "power", "logistic", "custom"]);
        assert!(catalog().iter().filter(|p| p.kind.has_exact()).all(|p| p.problem.exact().is_some()));
        assert!(catalog()[3].problem.exact().is_none());
    }

    #[test]
    fn exact_values() {
        let lin = linear(1.0, alpha(0.5), 0.0, 1.0, 1.0).unwrap();
        assert!((exact_at(&lin, 1.0) - 7.38905609893065).abs() < 1e-13);
        for al in [0.2, 0.5, 1.0] {
            let pw = power(2.0, alpha(al), 0.0, 3.0, 0.0).unwrap();
            assert!((exact_at(&pw, 3.0) - 9.0).abs() < 1e-12);
        }
        let flat = linear(0.0, alpha(0.4), 0.0, 1.0, 2.5).unwrap();
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(exact_at(&flat, t), 2.5);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(power(0.0, alpha(0.5), 0.0, 1.0, 0.0).is_err());
        assert!(logistic(1.0, 2.0, alpha(0.5), 0.0, 1.0, 0.0).is_err());
        assert!(logistic(1.0, 0.0, alpha(0.5), 0.0, 1.0, 1.0).is_err());
        assert!(linear(f64::NAN, alpha(0.5), 0.0, 1.0, 1.0).is_err());
        assert!("quadratic".parse::<ProblemKind>().is_err());
        assert_eq!("logistic".parse::<ProblemKind>().unwrap(), ProblemKind::Logistic);
    }

    #[test]
    fn negative_parameters_and_offset_start() {
        let lin = linear(-1.5, alpha(0.7), 0.5, 2.0, -2.0).unwrap();
        assert!(certify(&lin.problem, DEFAULT_EPS).unwrap() < 1e-5);
        let lg = logistic(-0.5, 3.0, alpha(0.6), 0.25, 2.0, 4.0).unwrap();
        assert!(certify(&lg.problem, DEFAULT_EPS).unwrap() < 1e-5);
        let pw = power(1.5, alpha(0.3), 1.0, 2.0, -1.0).unwrap();
        assert!(certify(&pw.problem, DEFAULT_EPS).unwrap() < 1e-5);
    }

    #[test]
    fn exact_forms_pass_residual_at_random_interior_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for al in [0.3, 0.5, 0.8, 1.0] {
            for p in catalog_for(alpha(al), 0.0, 1.0).unwrap() {
                let Some(exact) = p.problem.exact() else { continue };
                for _ in 0..10 {
                    let t: f64 = rng.gen_range(0.05..0.95);
                    let r = cfd_residual(exact, p.problem.rhs(), p.problem.alpha(), t, 1e-7);
                    assert!(r < 1e-6, "{} alpha={al} t={t}: {r}", p.name());
                }
            }
        }
    }

    #[test]
    fn reference_matches_exact_forms() {
        for al in [0.3, 0.5, 0.8, 1.0] {
            for p in catalog_for(alpha(al), 0.0, 1.0).unwrap() {
                if p.problem.exact().is_none() {
                    continue;
                }
                let traj = reference_solve(&p.problem, 16, 1024).unwrap();
                for (t, y) in traj.points() {
                    let e = exact_at(&p, t);
                    assert!((y - e).abs() <= 1e-7 * e.abs(), "{} alpha={al} t={t}: {y} vs {e}", p.name());
                }
            }
        }
    }
}
