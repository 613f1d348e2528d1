use canardlab::analysis::{
    brute_force_k, entry_index, kstar_pitchfork_euler, kstar_rk_for, kstar_transcritical_euler, lambert_w0, wayout,
};
use canardlab::linearization::{canard_spacing, symmetry_defect};
use canardlab::schemes::{a_family_residual, a_family_step_pitchfork, rk_step, ButcherTableau, Scheme, Stepper, SHIPPED};
use canardlab::systems::{PlanarPoint, SingularityKind, SystemParams};
use canardlab::verify::lattice_rho;
use canardlab::{approx_eq, PrecisionContext, Scalar};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Op {
    Add(u32),
    Mul(u32),
    Div(u32),
    Sqrt,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (1u32..1000).prop_map(Op::Add),
        (1u32..1000).prop_map(Op::Mul),
        (1u32..1000).prop_map(Op::Div),
        Just(Op::Sqrt),
    ]
}

fn evaluate(ctx: &PrecisionContext, ops: &[Op]) -> Scalar {
    let mut v = ctx.ratio(1, 3);
    for op in ops {
        v = match op {
            Op::Add(k) => v + ctx.ratio(i64::from(*k), 7),
            Op::Mul(k) => v * ctx.ratio(i64::from(*k), 113),
            Op::Div(k) => v / ctx.ratio(i64::from(*k), 11),
            Op::Sqrt => v.sqrt(),
        };
    }
    v
}

fn params(ctx: &PrecisionContext, h: f64, eps: f64) -> SystemParams {
    let h = ctx.parse(&format!("{h:.6}")).unwrap();
    let eps = ctx.parse(&format!("{eps:.6}")).unwrap();
    SystemParams::new(eps, h).unwrap()
}

fn kind() -> impl Strategy<Value = SingularityKind> {
    prop_oneof![
        Just(SingularityKind::Transcritical),
        Just(SingularityKind::Pitchfork),
        Just(SingularityKind::Fold),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn well_conditioned_expressions_agree_across_precisions(ops in prop::collection::vec(op(), 1..100), d in 16u32..120) {
        let lo = PrecisionContext::new(d).unwrap();
        let hi = PrecisionContext::new(2 * d).unwrap();
        let a = evaluate(&lo, &ops);
        let b = evaluate(&hi, &ops);
        let rel = ((&a - &b) / &b).abs();
        prop_assert!(rel <= hi.pow10(5 - d as i32), "{:?} vs {:?}", a, b);
    }

    #[test]
    fn rk_maps_keep_the_invariant_lines(name in prop::sample::select(SHIPPED.to_vec()), s in -10.0f64..10.0, h in 0.001f64..0.5, eps in 0.001f64..2.0) {
        let c = PrecisionContext::new(40).unwrap();
        let t = ButcherTableau::shipped(&c, name).unwrap();
        let pr = params(&c, h, eps);
        let s = c.from_f64(s);
        let p = rk_step(&t, SingularityKind::Transcritical, &pr, &PlanarPoint::new(s.clone(), s.clone()));
        prop_assert_eq!(&p.x, &p.y);
        let p = rk_step(&t, SingularityKind::Pitchfork, &pr, &PlanarPoint::new(c.zero(), s));
        prop_assert!(p.x.is_zero());
    }

    #[test]
    fn kahan_maps_are_birational(k in prop_oneof![Just(SingularityKind::Transcritical), Just(SingularityKind::Fold)],
                                 x in -3.0f64..3.0, y in -3.0f64..3.0, h in 0.001f64..0.5, eps in 0.001f64..2.0) {
        let c = PrecisionContext::new(50).unwrap();
        let fwd = Stepper::new(k, Scheme::Kahan, params(&c, h, eps)).unwrap();
        let p = PlanarPoint::new(c.from_f64(x), c.from_f64(y));
        if let Ok(q) = fwd.step(&p) {
            if let Ok(back) = fwd.reversed().step(&q) {
                let scale = q.x.abs().max(q.y.abs()).max(c.one());
                prop_assert!(back.distance_max(&p) <= c.tolerance() * scale);
            }
        }
    }

    #[test]
    fn a_family_is_reversible(a in prop::sample::select(vec![(-1, 2), (0, 1), (1, 2)]),
                              x in -2.0f64..2.0, y in -2.0f64..2.0, h in 0.001f64..0.3, eps in 0.001f64..1.0) {
        let c = PrecisionContext::new(50).unwrap();
        let a = c.ratio(a.0, a.1);
        let pr = params(&c, h, eps);
        let p = PlanarPoint::new(c.from_f64(x), c.from_f64(y));
        let Ok(fwd) = a_family_step_pitchfork(&a, &pr, &p) else { return Ok(()) };
        let residual = a_family_residual(&a, &pr, &p, &fwd.point.x);
        prop_assert!(residual.abs() <= c.tolerance());
        // The reversed relation is solved by the original abscissa.
        let reverse = a_family_residual(&a, &pr.reversed(), &fwd.point, &p.x);
        prop_assert!(reverse.abs() <= c.tolerance());
        // Branch selection retraces the step when the step is short.
        if h * (x.abs().powi(3) + (x * y).abs()) < 0.1 {
            let back = a_family_step_pitchfork(&a, &pr.reversed(), &fwd.point).unwrap();
            prop_assert!(back.point.distance_max(&p) <= c.tolerance(), "{:?} -> {:?}", p, back.point);
        }
    }

    #[test]
    fn pairing_identity_holds_off_poles(k in kind(), d in -5.0f64..5.0, h in 0.001f64..0.5, eps in 0.001f64..2.0) {
        let c = PrecisionContext::new(50).unwrap();
        let pr = params(&c, h, eps);
        let scheme = match k {
            SingularityKind::Pitchfork => Scheme::AFamily(c.zero()),
            _ => Scheme::Kahan,
        };
        let s = c.from_f64(d);
        if let Ok(defect) = symmetry_defect(k, &scheme, &pr, &s) {
            prop_assert!(defect <= c.tolerance());
        }
    }

    #[test]
    fn kahan_off_lattice_exit_is_one_or_two_late(k in kind(), n in 1i64..60, theta in 0.001f64..0.999,
                                                 h in prop::sample::select(vec![0.01, 0.1]), eps in prop::sample::select(vec![0.01, 1.0])) {
        let c = PrecisionContext::new(50).unwrap();
        let pr = params(&c, h, eps);
        let rho = lattice_rho(k, &pr, n) + canard_spacing(k, &pr) * c.from_f64(theta);
        prop_assert_eq!(entry_index(k, &pr, &rho), n);
        let r = wayout(k, &Scheme::Kahan, &pr, &rho, 1000).unwrap();
        prop_assert!(r.psi == n + 1 || r.psi == n + 2, "N={} psi={}", n, r.psi);
    }

    #[test]
    fn lambert_identity(e in -30.0f64..30.0) {
        let c = PrecisionContext::new(80).unwrap();
        let x = c.from_f64(10f64.powf(e));
        let w = lambert_w0(&x).unwrap();
        prop_assert!(approx_eq(&(&w * w.exp()), &x, &(c.tolerance() * x.clone().max(c.one()))));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn euler_transcritical_kstar_is_a_lower_bound(frac in 0.02f64..0.98, h in 0.05f64..0.3, eps in 0.01f64..1.0) {
        let c = PrecisionContext::new(30).unwrap();
        let pr = params(&c, h, eps);
        let rho = c.from_f64(frac) / (&pr.h * 2);
        let bound = kstar_transcritical_euler(&rho, &pr.h, &pr.epsilon).unwrap();
        let k = brute_force_k(SingularityKind::Transcritical, &Scheme::Euler, &pr, &rho, 2_000_000).unwrap();
        prop_assert!(bound <= k as i32, "K*={:?} K={}", bound, k);
    }

    #[test]
    fn euler_pitchfork_kstar_is_a_lower_bound(frac in 0.02f64..0.98, h in 0.05f64..0.3, eps in 0.01f64..1.0) {
        let c = PrecisionContext::new(30).unwrap();
        let pr = params(&c, h, eps);
        let rho = c.from_f64(frac) / &pr.h;
        let bound = kstar_pitchfork_euler(&rho, &pr.h, &pr.epsilon).unwrap();
        let k = brute_force_k(SingularityKind::Pitchfork, &Scheme::Euler, &pr, &rho, 2_000_000).unwrap();
        prop_assert!(bound <= k as i32, "K*={:?} K={}", bound, k);
    }

    #[test]
    fn rk_kstar_is_a_lower_bound(name in prop::sample::select(vec!["heun2", "kutta3", "heun3", "ralston3", "ssprk3"]),
                                 frac in 0.05f64..0.95, h in 0.05f64..0.3, eps in 0.01f64..1.0) {
        let c = PrecisionContext::new(30).unwrap();
        let t = ButcherTableau::shipped(&c, name).unwrap();
        let pr = params(&c, h, eps);
        // Entry offsets inside the contracting range of the first multiplier.
        let rho = c.from_f64(frac) / (&pr.h * 2);
        let bound = match kstar_rk_for(&t, &pr, &rho) {
            Ok(b) => b.kstar,
            Err(_) => return Ok(()),
        };
        let k = brute_force_k(SingularityKind::Transcritical, &Scheme::RungeKutta(t), &pr, &rho, 2_000_000).unwrap();
        // The bound is derived under the standing assumption K > 2.
        prop_assert!(k <= 2 || bound <= k as i32, "K*={:?} K={}", bound, k);
    }
}
