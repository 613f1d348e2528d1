//! Critical step sizes of the nonlinear transcritical system by bisection
//! on the jump direction. Pass a digit count to override the default 5000.

use std::time::Instant;

use canardlab::analysis::{critical_h_bisection, linearized_h_star, BisectionConfig, TripletSource};
use canardlab::schemes::Scheme;
use canardlab::systems::SingularityKind;
use canardlab::PrecisionContext;

const ROWS: [(&str, &str, &str); 5] = [
    ("euler", "5", "1"),
    ("euler", "50", "1"),
    ("euler", "5", "0.01"),
    ("kutta3", "8", "1"),
    ("kutta3", "8", "0.01"),
];

fn main() -> anyhow::Result<()> {
    let digits = std::env::args().nth(1).map(|d| d.parse()).transpose()?.unwrap_or(5000);
    let ctx = PrecisionContext::new(digits)?;
    let cfg = BisectionConfig::new(ctx.parse("1e-4")?, 3);
    println!("{digits} digits, delta = 1e-4");
    for (name, rho, eps) in ROWS {
        let scheme = Scheme::from_name(&ctx, name, None)?;
        let (rho, eps) = (ctx.parse(rho)?, ctx.parse(eps)?);
        let kind = SingularityKind::Transcritical;
        let linear = linearized_h_star(kind, &scheme, &rho, &eps, None)?.expect("explicit schemes have a root");
        let t0 = Instant::now();
        let row = format!("{name:<7} rho {:<3} eps {:<5}", rho.to_decimal(3), eps.to_decimal(3));
        match critical_h_bisection(kind, &scheme, &rho, &eps, &cfg) {
            Ok(t) => {
                if let TripletSource::BisectionBracket { lo, hi } = t.source {
                    println!(
                        "{row} linearized {:.8}  bracket [{:.8}, {:.8}]  ({:.1?})",
                        linear,
                        lo,
                        hi,
                        t0.elapsed()
                    );
                }
            }
            Err(e) => println!("{row} linearized {linear:.8}  {e}"),
        }
    }
    Ok(())
}
