//! Subcommand bodies. Each one turns parsed flags into the full text it prints.

use conformable_core::analysis::{convergence_study, discrete_cfd, ratio_sweep, sample_exact};
use conformable_core::ivp::make_grid;
use conformable_core::oracle::catalog::{self, ProblemKind};
use conformable_core::oracle::{certify, cfd_limit_estimate, DEFAULT_EPS};
use conformable_core::schemes::solve;
use conformable_core::{Alpha, SchemeKind};

use crate::args::{CfdCheckArgs, Command, ConvergeArgs, InvalidityArgs, SolveArgs};
use crate::csv::{float, Table};
use crate::problem::{build, parse_alpha};
use crate::{reproduce, ConfigError, Result};

pub fn run(command: &Command) -> Result<String> {
    match command {
        Command::Solve(a) => cmd_solve(a),
        Command::Converge(a) => cmd_converge(a),
        Command::Invalidity(a) => cmd_invalidity(a),
        Command::CfdCheck(a) => cmd_cfd_check(a),
        Command::ListProblems => Ok(cmd_list_problems()),
        Command::Reproduce(_) => Ok(reproduce::render(&reproduce::run_all())),
    }
}

pub fn cmd_solve(args: &SolveArgs) -> Result<String> {
    if args.n == 0 {
        return Err(ConfigError::Invalid("--n must be at least 1".into()));
    }
    let named = build(&args.problem)?;
    let grid = named.problem.grid(args.n)?;
    let traj = solve(&named.problem, &grid, args.scheme.into())?;

    let mut table = Table::with_header(&["k", "t", "y"]);
    for (k, (t, y)) in traj.points().enumerate() {
        table.row(&[k.to_string(), float(t), float(y)]);
    }
    if let Some(k) = traj.diverged_at() {
        table.comment(format_args!("diverged at k={k}"));
    }
    Ok(table.into_string())
}

pub fn cmd_converge(args: &ConvergeArgs) -> Result<String> {
    if args.levels < 3 {
        return Err(ConfigError::Invalid("--levels must be at least 3".into()));
    }
    if args.n0 == 0 {
        return Err(ConfigError::Invalid("--n0 must be at least 1".into()));
    }
    let named = build(&args.problem)?;
    let mut table = Table::with_header(&[
        "scheme",
        "problem",
        "alpha",
        "N",
        "h",
        "final_abs_err",
        "max_abs_err",
        "order_est",
    ]);
    for &scheme in &args.scheme {
        let report = convergence_study(&named, scheme.into(), args.n0, args.levels)?;
        for (j, row) in report.rows.iter().enumerate() {
            let order = match j.checked_sub(1).and_then(|i| report.orders[i]) {
                Some(o) => float(o),
                None => String::new(),
            };
            table.row(&[
                report.scheme.name().into(),
                report.problem.clone(),
                float(report.alpha.get()),
                row.n_steps.to_string(),
                float(row.h),
                float(row.final_abs_err),
                float(row.max_abs_err),
                order,
            ]);
        }
        table.comment(format_args!("verdict: {}", report.verdict));
    }
    Ok(table.into_string())
}

pub fn cmd_invalidity(args: &InvalidityArgs) -> Result<String> {
    let alpha = parse_alpha(args.alpha)?;
    let diag = ratio_sweep(alpha, args.t0, args.k, &args.h_list)?;
    let mut table = Table::with_header(&["alpha", "t0", "k", "h", "implied_alpha"]);
    for &(h, implied) in &diag.entries {
        table.row(&[
            float(alpha.get()),
            float(diag.t0),
            diag.k.to_string(),
            float(h),
            float(implied),
        ]);
    }
    table.comment(format_args!("verdict: {}", diag.verdict));
    Ok(table.into_string())
}

pub fn cmd_cfd_check(args: &CfdCheckArgs) -> Result<String> {
    let t = args.t0;
    if !(t.is_finite() && t > 0.0) {
        return Err(ConfigError::Invalid(format!("--t0 must be positive, got {t}")));
    }
    if args.h_list.is_empty() || args.h_list.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(ConfigError::Invalid("--h-list values must be positive".into()));
    }
    let named = build(&args.problem)?;
    let problem = &named.problem;
    let exact = problem
        .exact()
        .ok_or_else(|| ConfigError::Invalid("cfd-check needs an exact solution (--exact)".into()))?;
    let alpha = problem.alpha();
    let y = |t: f64| exact.eval(t, 0.0);
    let target = problem.rhs().eval(t, y(t));

    let mut table = Table::with_header(&["t", "eps_or_h", "estimate", "target", "abs_err"]);
    table.comment(format_args!("limit quotient (y(t + eps t^(1-alpha)) - y(t))/eps"));
    for &eps in &args.h_list {
        let estimate = cfd_limit_estimate(y, t, alpha, eps);
        push_check(&mut table, t, eps, estimate, target);
    }
    table.comment(format_args!("discrete alpha (y(t+h) - y(t))/((t+h)^alpha - t^alpha)"));
    for &h in &args.h_list {
        let estimate = discrete_at(exact, t, h, alpha)?;
        push_check(&mut table, t, h, estimate, target);
    }
    Ok(table.into_string())
}

fn discrete_at(exact: &conformable_core::Expr, t: f64, h: f64, alpha: Alpha) -> Result<f64> {
    let grid = make_grid(t, t + h, 1)?;
    Ok(discrete_cfd(&sample_exact(exact, &grid), alpha)?[0])
}

fn push_check(table: &mut Table, t: f64, step: f64, estimate: f64, target: f64) {
    table.row(&[
        float(t),
        float(step),
        float(estimate),
        float(target),
        float((estimate - target).abs()),
    ]);
}

pub fn cmd_list_problems() -> String {
    let alpha = Alpha::new(0.5).expect("valid order");
    let mut out = String::new();
    out.push_str("# catalog problems (exact forms certified at alpha=0.5 on [0, 1], eps=1e-7)\n");
    for kind in ProblemKind::ALL {
        let params: Vec<String> = kind
            .default_parameters()
            .iter()
            .map(|(n, v)| format!("--{n} {v}"))
            .collect();
        let params = if params.is_empty() {
            "--rhs <expr> [--exact <expr>]".to_string()
        } else {
            params.join(" ")
        };
        let exact = match kind {
            ProblemKind::Custom => "exact: optional".to_string(),
            _ => {
                let named = catalog::with_parameters(kind, |_| None, alpha, 0.0, 1.0, kind.default_y0())
                    .expect("default catalog parameters are valid");
                let residual = certify(&named.problem, DEFAULT_EPS).expect("catalog entry has an exact form");
                let status = if residual < 1e-5 { "certified" } else { "NOT certified" };
                format!("exact: yes, max residual {residual:.3e} ({status})")
            }
        };
        out.push_str(&format!(
            "{:<9} {:<28} defaults: {} --y0 {}; {}\n",
            kind.name(),
            kind.formula(),
            params,
            kind.default_y0(),
            exact
        ));
    }
    out.push_str(&format!(
        "# schemes: {}\n",
        SchemeKind::ALL.map(SchemeKind::name).join(", ")
    ));
    out
}
