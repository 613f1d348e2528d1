//! K* lower bounds against direct step counts, and their growth as the
//! entry offset approaches the critical value.

use canardlab::analysis::{brute_force_k, kstar_pitchfork_euler, kstar_rk_for, kstar_transcritical_euler};
use canardlab::schemes::{ButcherTableau, Scheme};
use canardlab::systems::{SingularityKind, SystemParams};
use canardlab::PrecisionContext;

fn main() -> anyhow::Result<()> {
    let ctx = PrecisionContext::new(60)?;
    let params = SystemParams::new(ctx.parse("0.01")?, ctx.parse("0.1")?)?;
    let (h, eps) = (&params.h, &params.epsilon);
    let budget = 1_000_000;

    println!("euler, h = 0.1, eps = 0.01");
    for rho in ["1", "2", "4", "4.9", "4.99"] {
        let rho = ctx.parse(rho)?;
        let t = kstar_transcritical_euler(&rho, h, eps)?;
        let k = brute_force_k(SingularityKind::Transcritical, &Scheme::Euler, &params, &rho, budget)?;
        println!("  transcritical rho {:<5} K* {:>10.2}  K {k:>6}", rho.to_decimal(4), t.to_f64());
    }
    for rho in ["2", "8", "9.9"] {
        let rho = ctx.parse(rho)?;
        let p = kstar_pitchfork_euler(&rho, h, eps)?;
        let k = brute_force_k(SingularityKind::Pitchfork, &Scheme::Euler, &params, &rho, budget)?;
        println!("  pitchfork     rho {:<5} K* {:>10.2}  K {k:>6}", rho.to_decimal(4), p.to_f64());
    }

    let tableau = ButcherTableau::shipped(&ctx, "kutta3")?;
    let scheme = Scheme::RungeKutta(tableau.clone());
    println!("kutta3, h = 0.1, eps = 0.01");
    for rho in ["1", "4", "7.9"] {
        let rho = ctx.parse(rho)?;
        let b = kstar_rk_for(&tableau, &params, &rho)?;
        let k = brute_force_k(SingularityKind::Transcritical, &scheme, &params, &rho, budget)?;
        println!(
            "  rho {:<4} theta0 {:.6}  cbar {:.4}  K* {:.4}  K {k}",
            rho.to_decimal(3),
            b.theta0.to_f64(),
            b.cbar.to_f64(),
            b.kstar.to_f64()
        );
    }
    Ok(())
}
