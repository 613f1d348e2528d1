//! Invariant structure at the fold: the Kahan parabola, the gap in the
//! reduced explicit maps, and the first integral of the flow.

use canardlab::schemes::{ButcherTableau, Scheme, Stepper};
use canardlab::systems::{
    fold_first_integral, fold_parabola_offset, fold_rk_reduced_gap, fold_slow_solutions, PlanarPoint, SingularityKind,
    SystemParams,
};
use canardlab::PrecisionContext;

fn main() -> anyhow::Result<()> {
    let ctx = PrecisionContext::new(60)?;
    let params = SystemParams::new(ctx.one(), ctx.parse("0.001")?)?;
    let stepper = Stepper::new(SingularityKind::Fold, Scheme::Kahan, params.clone())?;
    let offset = fold_parabola_offset(&params);
    let x0 = ctx.parse("-2.5")?;
    let mut p = PlanarPoint::new(x0.clone(), x0.square() - &offset);
    let mut worst = ctx.zero();
    for _ in 0..10_000 {
        p = stepper.step(&p)?;
        worst = worst.max((p.x.square() - &offset - &p.y).abs());
    }
    println!("kahan: 10^4 steps along y = x^2 - {:.6}, worst residual {worst:.3}", offset);

    let h = ctx.parse("0.1")?;
    for x in ["-0.2", "-0.05", "0.0"] {
        let x = ctx.parse(x)?;
        match fold_slow_solutions(&x, &h) {
            Some((lo, hi)) => println!("euler: x {:<5} slow solutions y = {lo:.6}, {hi:.6}", x.to_decimal(3)),
            None => println!("euler: x {:<5} in the gap, no slow solution", x.to_decimal(3)),
        }
    }
    let heun = ButcherTableau::shipped(&ctx, "heun2")?;
    for x in ["-0.2", "-0.05"] {
        let x = ctx.parse(x)?;
        println!("heun2: x {:<5} reduced map defined: {}", x.to_decimal(3), fold_rk_reduced_gap(&heun, &x, &h)?);
    }

    let eps = ctx.parse("0.3")?;
    for x in ["-1", "0", "0.7"] {
        let x = ctx.parse(x)?;
        let on_slow = PlanarPoint::new(x.clone(), x.square() - &eps / 2);
        println!("first integral on the slow curve at x {:<4}: {:.3}", x.to_decimal(2), fold_first_integral(&on_slow, &eps));
    }
    Ok(())
}
