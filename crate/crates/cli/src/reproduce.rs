//! The acceptance checks, runnable from the command line (`conformable
//! reproduce`) and from the `acceptance` test target.
//!
//! Every tolerance is fixed here. Expected values that have a closed form
//! (square roots, `(1 + 2 sqrt(h))^(1/h)`, `e^2`, `2 t^1.5`) are computed with
//! `std` floating point, independently of the solver code paths.

use conformable_core::analysis::{
    convergence_study, discrete_cfd, error_norms_with, implied_alpha, sample_exact, ConvergenceReport,
    ORDER_WINDOW,
};
use conformable_core::ivp::make_grid;
use conformable_core::oracle::catalog::{catalog_for, linear, power};
use conformable_core::oracle::{cfd_residual, reference_solve};
use conformable_core::schemes::solve;
use conformable_core::{Alpha, Expr, SchemeKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SCHEME_EQUIVALENCE_TOL: f64 = 1e-12;
pub const RATIO_TOL: f64 = 1e-4;
pub const HALVING_RATIO: (f64, f64) = (2.0 * 0.75, 2.0 * 1.25);
pub const RESIDUAL_TOL: f64 = 1e-5;
pub const RESIDUAL_EPS: f64 = 1e-7;
pub const REFERENCE_REL_TOL: f64 = 1e-7;
pub const BLOWUP_FLOOR: f64 = 1e7;
const SEED: u64 = 0x00c0_ffee;

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
}

impl Outcome {
    fn new(id: u8, title: &'static str) -> Self {
        Outcome {
            id,
            title,
            passed: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.passed &= ok;
        let mark = if ok { "ok" } else { "FAIL" };
        self.details.push(format!("{mark:<4} {detail}"));
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "PASS"
        } else {
            "FAIL"
        }
    }
}

fn alpha(v: f64) -> Alpha {
    Alpha::new(v).expect("fixed orders are valid")
}

fn fmt_orders(report: &ConvergenceReport) -> String {
    let parts: Vec<String> = report
        .orders
        .iter()
        .map(|o| o.map_or("-".into(), |o| format!("{o:.3}")))
        .collect();
    parts.join(" ")
}

fn fmt_errors(report: &ConvergenceReport) -> String {
    let parts: Vec<String> = report.final_errors().map(|e| format!("{e:.3e}")).collect();
    parts.join(" ")
}

/// Scheme equivalence at α = 1 on `linear` (λ = 1, [0, 1], y0 = 1, N = 64).
pub fn scheme_equivalence() -> Outcome {
    let mut out = Outcome::new(1, "all three schemes coincide at alpha = 1");
    let named = linear(1.0, Alpha::ONE, 0.0, 1.0, 1.0).expect("valid problem");
    let grid = named.problem.grid(64).expect("valid grid");
    let trajs: Vec<_> = SchemeKind::ALL
        .iter()
        .map(|&s| solve(&named.problem, &grid, s).expect("grid matches problem"))
        .collect();
    for i in 0..trajs.len() {
        for j in i + 1..trajs.len() {
            let diff = trajs[i]
                .values()
                .iter()
                .zip(trajs[j].values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            let same_len = trajs[i].values().len() == trajs[j].values().len();
            out.check(
                same_len && diff < SCHEME_EQUIVALENCE_TOL,
                format!(
                    "{} vs {}: max |diff| = {diff:.3e} (tol {SCHEME_EQUIVALENCE_TOL:e})",
                    SchemeKind::ALL[i],
                    SchemeKind::ALL[j]
                ),
            );
        }
    }
    out
}

/// Modified scheme: last two observed orders in the window and strictly
/// decreasing final errors, for α ∈ {0.3, 0.5, 0.8, 1} on `linear` and `power`.
pub fn modified_convergence() -> Outcome {
    let mut out = Outcome::new(2, "modified scheme converges at first order for 0 < alpha <= 1");
    for a in [0.3, 0.5, 0.8, 1.0] {
        let problems = [
            linear(1.0, alpha(a), 0.0, 1.0, 1.0).expect("valid problem"),
            power(2.0, alpha(a), 0.0, 1.0, 0.0).expect("valid problem"),
        ];
        for named in &problems {
            let report = convergence_study(named, SchemeKind::ModifiedConformableEuler, 32, 5)
                .expect("study runs on a catalog problem");
            let tail = &report.orders[report.orders.len() - 2..];
            let orders_ok = tail
                .iter()
                .all(|o| o.is_some_and(|o| o >= ORDER_WINDOW.0 && o <= ORDER_WINDOW.1));
            let errs: Vec<f64> = report.final_errors().collect();
            let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
            out.check(
                orders_ok && decreasing,
                format!(
                    "{} alpha={a}: orders [{}] final errors [{}] verdict {}",
                    named.name(),
                    fmt_orders(&report),
                    fmt_errors(&report),
                    report.verdict
                ),
            );
        }
    }
    out
}

/// Original scheme: final error never decreases under refinement (or the
/// run diverges), and the α = 0.5, N = 100 value matches its closed form.
pub fn conformable_invalidity() -> Outcome {
    let mut out = Outcome::new(3, "conformable Euler does not converge for alpha < 1");
    for a in [0.3, 0.5, 0.8] {
        let named = linear(1.0, alpha(a), 0.0, 1.0, 1.0).expect("valid problem");
        let report =
            convergence_study(&named, SchemeKind::ConformableEuler, 32, 5).expect("study runs");
        let errs: Vec<f64> = report.final_errors().collect();
        let non_decreasing = errs.windows(2).all(|w| w[1] >= w[0]);
        let diverged = report.rows.iter().any(|r| r.diverged);
        out.check(
            non_decreasing || diverged,
            format!(
                "linear alpha={a}, N=32..512: final errors [{}] verdict {}",
                fmt_errors(&report),
                report.verdict
            ),
        );
    }

    let named = linear(1.0, alpha(0.5), 0.0, 1.0, 1.0).expect("valid problem");
    let grid = named.problem.grid(100).expect("valid grid");
    let traj = solve(&named.problem, &grid, SchemeKind::ConformableEuler).expect("grid matches");
    let h: f64 = 0.01;
    let closed = (1.0 + 2.0 * h.sqrt()).powf(1.0 / h);
    let exact = 2.0f64.exp();
    let y1 = traj.last();
    out.check(
        !traj.is_diverged() && y1 > BLOWUP_FLOOR && (y1 - closed).abs() <= 1e-10 * closed,
        format!(
            "alpha=0.5, N=100: y(1) = {y1:.6e}, closed form (1+2 sqrt h)^(1/h) = {closed:.6e}, exact e^2 = {exact:.6}"
        ),
    );
    out
}

/// Implied alpha: √11, √101, √1001 at α = 0.5, t0 = 1, k = 1; exactly 1 at
/// α = 1; h-independent for t0 = 0.
pub fn inconsistency_ratio() -> Outcome {
    let mut out = Outcome::new(4, "implied alpha grows without bound as h -> 0");
    for (h, n) in [(1e-1, 11.0f64), (1e-2, 101.0), (1e-3, 1001.0)] {
        let got = implied_alpha(alpha(0.5), 1.0, 1, h);
        let want = n.sqrt();
        out.check(
            (got - want).abs() <= RATIO_TOL,
            format!("alpha=0.5 t0=1 k=1 h={h:e}: {got:.6} vs sqrt({n}) = {want:.6}"),
        );
    }

    let mut all_one = true;
    for t0 in [0.0, 0.5, 1.0, 7.0] {
        for k in [1u64, 2, 10, 1000] {
            for h in [1e-1, 1e-3, 1e-6] {
                all_one &= implied_alpha(Alpha::ONE, t0, k, h) == 1.0;
            }
        }
    }
    out.check(all_one, "alpha=1: every implied alpha equals 1 exactly".into());

    let mut worst_ulps = 0.0f64;
    for a in [0.3, 0.5, 0.8] {
        for k in [1u64, 4, 9, 50] {
            let vals: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-6]
                .iter()
                .map(|&h| implied_alpha(alpha(a), 0.0, k, h))
                .collect();
            for v in &vals {
                worst_ulps = worst_ulps.max((v - vals[0]).abs() / (f64::EPSILON * vals[0]));
            }
        }
    }
    out.check(
        worst_ulps <= 4.0,
        format!("t0=0: spread over h is {worst_ulps} ulps (tol 4)"),
    );
    out
}

/// Discrete conformable derivative of t² at α = 0.5 on [0.5, 1.5]: the max
/// error against 2 t^1.5 halves (±25%) per halving of h.
pub fn discrete_cfd_fidelity() -> Outcome {
    let mut out = Outcome::new(5, "discrete derivative representation is first-order accurate");
    let y = Expr::parse("t^2").expect("valid expression");
    let half = alpha(0.5);
    let max_err = |n: usize| {
        let grid = make_grid(0.5, 1.5, n).expect("valid grid");
        let d = discrete_cfd(&sample_exact(&y, &grid), half).expect("enough samples");
        d.iter()
            .enumerate()
            .map(|(k, dk)| {
                let t = grid.node(k).expect("in range");
                (dk - 2.0 * t.powf(1.5)).abs()
            })
            .fold(0.0f64, f64::max)
    };
    let errs: Vec<(f64, f64)> = [50usize, 100, 200].iter().map(|&n| (1.0 / n as f64, max_err(n))).collect();
    for w in errs.windows(2) {
        let ratio = w[0].1 / w[1].1;
        out.check(
            ratio >= HALVING_RATIO.0 && ratio <= HALVING_RATIO.1,
            format!(
                "h {:.3} -> {:.3}: max error {:.4e} -> {:.4e}, ratio {ratio:.4} (want [{}, {}])",
                w[0].0, w[1].0, w[0].1, w[1].1, HALVING_RATIO.0, HALVING_RATIO.1
            ),
        );
    }
    out
}

/// Every catalog exact form satisfies the limit definition and agrees with
/// the s-domain reference integrator.
pub fn oracle_certification() -> Outcome {
    let mut out = Outcome::new(6, "catalog exact solutions certify against both oracles");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for a in [0.3, 0.5, 0.8, 1.0] {
        for named in catalog_for(alpha(a), 0.0, 1.0).expect("default catalog") {
            let Some(exact) = named.problem.exact() else { continue };
            let p = &named.problem;
            let worst_residual = (0..10)
                .map(|_| rng.gen_range(0.001..1.0))
                .map(|t| cfd_residual(exact, p.rhs(), p.alpha(), t, RESIDUAL_EPS))
                .fold(0.0f64, f64::max);

            let reference = reference_solve(p, 16, 1024).expect("valid reference run");
            let worst_rel = error_norms_with(&reference, |_, t| exact.eval(t, 0.0));
            let rel = reference
                .points()
                .map(|(t, y)| {
                    let e = exact.eval(t, 0.0);
                    if y == e {
                        0.0
                    } else {
                        (y - e).abs() / e.abs()
                    }
                })
                .fold(0.0f64, f64::max);
            out.check(
                worst_residual < RESIDUAL_TOL && rel <= REFERENCE_REL_TOL && !reference.is_diverged(),
                format!(
                    "{} alpha={a}: max residual {worst_residual:.3e} (tol {RESIDUAL_TOL:e}), \
                     reference max rel err {rel:.3e} (abs {:.3e}, tol {REFERENCE_REL_TOL:e})",
                    named.name(),
                    worst_rel.max_abs_err
                ),
            );
        }
    }
    out
}

pub fn numerical_criteria() -> Vec<Outcome> {
    vec![
        scheme_equivalence(),
        modified_convergence(),
        conformable_invalidity(),
        inconsistency_ratio(),
        discrete_cfd_fidelity(),
        oracle_certification(),
    ]
}

/// Runs the numerical checks twice and compares the rendered reports byte for byte.
pub fn determinism() -> Outcome {
    let mut out = Outcome::new(7, "identical runs give byte-identical output");
    let first = render(&numerical_criteria());
    let second = render(&numerical_criteria());
    out.check(
        first == second,
        format!("two runs, {} bytes each, identical: {}", first.len(), first == second),
    );
    out
}

pub fn run_all() -> Vec<Outcome> {
    let mut all = numerical_criteria();
    all.push(determinism());
    all
}

pub fn render_one(o: &Outcome) -> String {
    let mut s = format!("[{}] criterion {}: {}\n", o.status(), o.id, o.title);
    for d in &o.details {
        s.push_str("       ");
        s.push_str(d);
        s.push('\n');
    }
    s
}

pub fn render(outcomes: &[Outcome]) -> String {
    let mut s = String::new();
    for o in outcomes {
        s.push_str(&render_one(o));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    s.push_str(&format!("# summary: {passed}/{} criteria passed\n", outcomes.len()));
    s
}
