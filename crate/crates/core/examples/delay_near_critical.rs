//! Exit height of orbits from both sides of the canard: symmetric for a
//! small step, delayed and reversed once h passes the critical value.

use canardlab::analysis::{classify_visiting, default_max_n, jump_start, linearized_h_star};
use canardlab::schemes::{Scheme, Stepper};
use canardlab::systems::{SingularityKind, SystemParams};
use canardlab::PrecisionContext;

fn main() -> anyhow::Result<()> {
    let ctx = PrecisionContext::new(200)?;
    let kind = SingularityKind::Transcritical;
    let (rho, eps) = (ctx.int(5), ctx.one());
    let h_star = linearized_h_star(kind, &Scheme::Euler, &rho, &eps, None)?.expect("euler root");
    for h in [ctx.parse("0.001")?, &h_star * ctx.parse("0.999")?, &h_star * ctx.parse("1.0002")?] {
        let params = SystemParams::new(eps.clone(), h.clone())?;
        let stepper = Stepper::new(kind, Scheme::Euler, params.clone())?;
        for sign in [1, -1] {
            let delta = ctx.parse("1e-4")? * sign;
            let start = jump_start(kind, &params, &rho, &delta);
            let mut exit_y = ctx.zero();
            let class = classify_visiting(&stepper, start, &rho, default_max_n(&params, &rho), |_, p| exit_y = p.y.clone())?;
            println!("h {:.6} delta {:+e}: {class:<5} exit at y = {:.4}", h.to_f64(), 1e-4 * sign as f64, exit_y.to_f64());
        }
    }
    Ok(())
}
