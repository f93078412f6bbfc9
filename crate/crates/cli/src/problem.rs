use conformable_core::oracle::catalog::{self, ProblemKind};
use conformable_core::{Alpha, Expr, NamedProblem};

use crate::args::ProblemArgs;
use crate::{ConfigError, Result};

pub fn parse_alpha(value: f64) -> Result<Alpha> {
    Ok(Alpha::new(value)?)
}

fn parse_expr(what: &'static str, source: &str) -> Result<Expr> {
    Expr::parse(source).map_err(|source| ConfigError::Expression { what, source })
}

/// Resolves the problem flags into a catalog or custom problem.
pub fn build(args: &ProblemArgs) -> Result<NamedProblem> {
    let alpha = parse_alpha(args.alpha)?;
    let kind = match (&args.problem, &args.rhs) {
        (Some(name), _) => name.parse::<ProblemKind>()?,
        (None, Some(_)) => ProblemKind::Custom,
        (None, None) => ProblemKind::Linear,
    };

    let overrides = [
        ("lambda", args.lambda),
        ("p", args.p),
        ("r", args.r),
        ("kcap", args.kcap),
    ];
    let known = kind.default_parameters();
    for (name, value) in overrides {
        if value.is_some() && !known.iter().any(|(n, _)| *n == name) {
            return Err(ConfigError::Invalid(format!(
                "--{name} does not apply to problem {kind}"
            )));
        }
    }

    if kind != ProblemKind::Custom {
        if args.rhs.is_some() || args.exact.is_some() {
            return Err(ConfigError::Invalid(format!(
                "--rhs and --exact only apply to custom problems, not {kind}"
            )));
        }
        let y0 = args.y0.unwrap_or(kind.default_y0());
        let lookup = |name: &str| overrides.iter().find(|(n, _)| *n == name).and_then(|(_, v)| *v);
        return Ok(catalog::with_parameters(kind, lookup, alpha, args.a, args.b, y0)?);
    }

    let rhs = args
        .rhs
        .as_deref()
        .ok_or_else(|| ConfigError::Invalid("custom problem needs --rhs".into()))?;
    let rhs = parse_expr("--rhs", rhs)?;
    let exact = args.exact.as_deref().map(|e| parse_expr("--exact", e)).transpose()?;
    let y0 = match (args.y0, &exact) {
        (Some(y0), _) => y0,
        (None, Some(exact)) => exact.eval(args.a, 0.0),
        (None, None) => kind.default_y0(),
    };
    Ok(catalog::custom(rhs, exact, alpha, args.a, args.b, y0)?)
}
