//! Property suites run by the `verify` subcommand.
//!
//! Each suite samples a fixed grid, so reports are deterministic for a
//! given precision.

use std::fmt;

use crate::analysis::{brute_force_k, kstar_pitchfork_euler, kstar_transcritical_euler, lambert_w0, wayout};
use crate::error::{Error, Result};
use crate::linearization::{canard_spacing, jacobian_factor, symmetry_center, symmetry_defect};
use crate::precision::{approx_eq, PrecisionContext, Scalar};
use crate::schemes::{rk_step, ButcherTableau, Scheme, Stepper, SHIPPED};
use crate::systems::{fold_first_integral, fold_parabola_offset, PlanarPoint, SingularityKind, SystemParams};

/// Names accepted by [`run_suite`], in the order [`run_all`] runs them.
pub const SUITES: [&str; 8] = [
    "kahan-symmetry",
    "rk-diagonal",
    "kahan-wayout",
    "birationality",
    "fold-invariants",
    "kstar-bounds",
    "stability-reversal",
    "lambert",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{:<20} {:>6} checks  {}", self.name, self.checks, status)?;
        if let Some(first) = self.failures.first() {
            write!(f, "  ({} failed, first: {first})", self.failures.len())?;
        }
        Ok(())
    }
}

fn grid(ctx: &PrecisionContext) -> Vec<SystemParams> {
    let mut out = Vec::new();
    for h in ["0.01", "0.1"] {
        for eps in ["0.01", "1"] {
            let p = SystemParams::new(ctx.parse(eps).expect("literal"), ctx.parse(h).expect("literal"));
            out.push(p.expect("positive literals"));
        }
    }
    out
}

fn implicit_cases(ctx: &PrecisionContext) -> Vec<(SingularityKind, Scheme)> {
    vec![
        (SingularityKind::Transcritical, Scheme::Kahan),
        (SingularityKind::Fold, Scheme::Kahan),
        (SingularityKind::Pitchfork, Scheme::AFamily(ctx.ratio(-1, 2))),
        (SingularityKind::Pitchfork, Scheme::AFamily(ctx.zero())),
        (SingularityKind::Pitchfork, Scheme::AFamily(ctx.ratio(1, 2))),
    ]
}

/// Symmetric lattice entry `εhN + εh/2`, or `εhN/2` on the fold.
pub fn lattice_rho(kind: SingularityKind, params: &SystemParams, n: i64) -> Scalar {
    let spacing = canard_spacing(kind, params);
    &spacing * params.h.constant(n, 1) - symmetry_center(kind, params)
}

fn kahan_symmetry(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("kahan-symmetry");
    let tol = ctx.tolerance();
    for params in grid(ctx) {
        for (kind, scheme) in implicit_cases(ctx) {
            let center = symmetry_center(kind, &params);
            for i in -100..=100 {
                let s = &center + ctx.ratio(i, 37);
                match symmetry_defect(kind, &scheme, &params, &s) {
                    Ok(d) => r.check(d <= tol, || format!("{kind} {scheme} s={}", s.to_decimal(8))),
                    Err(Error::Pole { .. }) => {}
                    Err(e) => r.check(false, || e.to_string()),
                }
            }
        }
    }
    r
}

fn rk_diagonal(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("rk-diagonal");
    for name in SHIPPED {
        let t = ButcherTableau::shipped(ctx, name).expect("shipped");
        for params in grid(ctx) {
            for i in -20..=20 {
                let s = ctx.ratio(i, 7);
                let p = rk_step(&t, SingularityKind::Transcritical, &params, &PlanarPoint::new(s.clone(), s.clone()));
                r.check(p.x == p.y, || format!("{name} transcritical s={}", s.to_decimal(6)));
                let p = rk_step(&t, SingularityKind::Pitchfork, &params, &PlanarPoint::new(ctx.zero(), s.clone()));
                r.check(p.x.is_zero(), || format!("{name} pitchfork y={}", s.to_decimal(6)));
            }
        }
    }
    r
}

fn kahan_wayout(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("kahan-wayout");
    for params in grid(ctx) {
        for kind in SingularityKind::ALL {
            for n in 1..=30 {
                let rho = lattice_rho(kind, &params, n);
                let got = wayout(kind, &Scheme::Kahan, &params, &rho, 10 * n as usize + 10);
                r.check(
                    matches!(&got, Ok(w) if w.n_in == n && w.psi == n),
                    || format!("{kind} N={n}: {got:?}"),
                );
            }
        }
    }
    r
}

fn birationality(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("birationality");
    let tol = ctx.tolerance();
    for params in grid(ctx) {
        for (kind, scheme) in implicit_cases(ctx) {
            let fwd = Stepper::new(kind, scheme.clone(), params.clone()).expect("defined pairs");
            let back = fwd.reversed();
            for i in -6..=6 {
                for j in -6..=6 {
                    let p = PlanarPoint::new(ctx.ratio(i, 5), ctx.ratio(j, 7));
                    let Ok(q) = fwd.step(&p) else { continue };
                    let Ok(b) = back.step(&q) else { continue };
                    r.check(b.distance_max(&p) <= tol, || {
                        format!("{kind} {scheme} at ({}, {})", p.x.to_decimal(4), p.y.to_decimal(4))
                    });
                }
            }
        }
    }
    r
}

fn fold_invariants(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("fold-invariants");
    let tol = ctx.tolerance();
    for params in grid(ctx) {
        let stepper = Stepper::new(SingularityKind::Fold, Scheme::Kahan, params.clone()).expect("kahan fold");
        let offset = fold_parabola_offset(&params);
        // Rounding errors made near the fold grow like exp(x²/ε) on the
        // repelling side; keep the orbit within x² ≤ 5ε, symmetric about 0.
        let spacing = canard_spacing(SingularityKind::Fold, &params).to_f64();
        let reach = (5.0 * params.epsilon.to_f64()).sqrt();
        let n = (2.0 * reach / spacing).floor().min(1000.0) as usize;
        let x0 = -(ctx.from_f64(spacing) * ctx.int(n as i64 / 2));
        let mut p = PlanarPoint::new(x0.clone(), x0.square() - &offset);
        for k in 0..n {
            let residual = (p.x.square() - &offset - &p.y).abs();
            let scale = p.x.square().max(ctx.one());
            r.check(residual <= &tol * &scale, || format!("parabola residual at k={k}"));
            match stepper.step(&p) {
                Ok(q) => p = q,
                Err(e) => {
                    r.check(false, || e.to_string());
                    break;
                }
            }
        }
        let eps = &params.epsilon;
        for i in -10..=10 {
            let x = ctx.ratio(i, 4);
            let on_slow = PlanarPoint::new(x.clone(), x.square() - eps / 2);
            let h = fold_first_integral(&on_slow, eps);
            r.check(h.abs() <= tol, || format!("first integral off zero at x={}", x.to_decimal(4)));
        }
    }
    r
}

fn kstar_bounds(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("kstar-bounds");
    for params in grid(ctx).into_iter().filter(|p| p.h > ctx.parse("0.05").expect("literal")) {
        let (h, eps) = (&params.h, &params.epsilon);
        for (kind, c) in [(SingularityKind::Transcritical, 2), (SingularityKind::Pitchfork, 1)] {
            let critical = 1 / (h * c);
            for frac in [1, 3, 5, 7, 9] {
                let rho = &critical * ctx.ratio(frac, 10);
                let bound = match kind {
                    SingularityKind::Transcritical => kstar_transcritical_euler(&rho, h, eps),
                    _ => kstar_pitchfork_euler(&rho, h, eps),
                };
                let budget = (rho.to_f64() * 4.0 / (h * eps).to_f64()) as usize + 100;
                let brute = brute_force_k(kind, &Scheme::Euler, &params, &rho, budget);
                r.check(
                    matches!((&bound, &brute), (Ok(b), Ok(k)) if *b <= *k as i32),
                    || format!("{kind} rho={}: K*={bound:?} K={brute:?}", rho.to_decimal(6)),
                );
            }
        }
    }
    r
}

fn stability_reversal(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("stability-reversal");
    let kind = SingularityKind::Pitchfork;
    let ds = ctx.pow10(-12);
    for params in grid(ctx) {
        let threshold = 2 / (params.h.square() * &params.epsilon);
        for (a, want) in [
            (&threshold - 1, 1),
            (threshold.clone(), 0),
            (&threshold + 1, -1),
        ] {
            let scheme = Scheme::AFamily(a);
            for i in -5..=5 {
                let s = ctx.ratio(i, 10);
                let lo = jacobian_factor(kind, &scheme, &params, &(&s - &ds));
                let hi = jacobian_factor(kind, &scheme, &params, &(&s + &ds));
                let sign = match (lo, hi) {
                    (Ok(lo), Ok(hi)) => {
                        let diff = hi - lo;
                        if diff.abs() <= ctx.tolerance() { 0 } else { diff.signum_i32() }
                    }
                    _ => continue,
                };
                r.check(sign == want, || format!("slope sign {sign}, want {want} at s={}", s.to_decimal(3)));
            }
        }
    }
    r
}

fn lambert(ctx: &PrecisionContext) -> SuiteReport {
    let mut r = SuiteReport::new("lambert");
    for e in -30..=30 {
        let x = ctx.pow10(e);
        match lambert_w0(&x) {
            Ok(w) => {
                let back = &w * w.exp();
                r.check(approx_eq(&back, &x, &(x.tolerance() * x.abs().max(ctx.one()))), || {
                    format!("w·e^w ≠ x at x=1e{e}")
                })
            }
            Err(err) => r.check(false, || err.to_string()),
        }
    }
    r
}

/// Runs one suite by name.
pub fn run_suite(ctx: &PrecisionContext, name: &str) -> Result<SuiteReport> {
    Ok(match name {
        "kahan-symmetry" => kahan_symmetry(ctx),
        "rk-diagonal" => rk_diagonal(ctx),
        "kahan-wayout" => kahan_wayout(ctx),
        "birationality" => birationality(ctx),
        "fold-invariants" => fold_invariants(ctx),
        "kstar-bounds" => kstar_bounds(ctx),
        "stability-reversal" => stability_reversal(ctx),
        "lambert" => lambert(ctx),
        other => return Err(Error::InvalidParams(format!("unknown suite {other:?}"))),
    })
}

pub fn run_all(ctx: &PrecisionContext) -> Vec<SuiteReport> {
    SUITES.iter().map(|name| run_suite(ctx, name).expect("listed suite")).collect()
}
