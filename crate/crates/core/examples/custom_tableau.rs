//! A Runge-Kutta method read from text: its diagonal stays invariant, and
//! its linearized critical triplet and multiplier ledger follow.

use canardlab::analysis::critical_triplet_linearized;
use canardlab::linearization::contraction_product;
use canardlab::schemes::{rk_step, ButcherTableau, Scheme};
use canardlab::systems::{PlanarPoint, SingularityKind, SystemParams};
use canardlab::PrecisionContext;

const RK4: &str = "
# classical fourth order
4
1/6 1/3 1/3 1/6
1/2
0 1/2
0 0 1
";

fn main() -> anyhow::Result<()> {
    let ctx = PrecisionContext::new(50)?;
    let rk4 = ButcherTableau::parse_text(&ctx, "rk4", RK4)?;
    let params = SystemParams::new(ctx.parse("0.1")?, ctx.parse("0.05")?)?;

    let p = rk_step(&rk4, SingularityKind::Transcritical, &params, &PlanarPoint::new(ctx.int(-3), ctx.int(-3)));
    println!("diagonal point after one step: ({:.12}, {:.12})", p.x, p.y);

    for h in ["0.05", "0.1", "0.2"] {
        let h = ctx.parse(h)?;
        match critical_triplet_linearized(&rk4, &h, &params.epsilon, None) {
            Some(t) => println!("h {:<5} rho* {:.8}  2 rho* h {:.6}", h.to_decimal(3), t.rho_star, (&t.rho_star * 2 * &h).to_f64()),
            None => println!("h {:<5} no critical entry: the multiplier never vanishes", h.to_decimal(3)),
        }
    }

    let ledger = contraction_product(SingularityKind::Transcritical, &Scheme::RungeKutta(rk4), &params, &ctx.int(2), 800)?;
    for e in ledger.entries.iter().step_by(200) {
        println!("k {:>3} s {:>7.3}  J {:.6}  log v {:.4}", e.k, e.s_pos.to_f64(), e.factor.to_f64(), e.log_running_product.to_f64());
    }
    Ok(())
}
