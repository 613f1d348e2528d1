//! Linearized critical step sizes h*(rho, eps) for the five surface
//! tableaux. Each row shows the spread of h* along the eps-axis.

use canardlab::analysis::{sweep_surface, SweepMode};
use canardlab::schemes::{ButcherTableau, SURFACE_SET};
use canardlab::PrecisionContext;

fn main() -> anyhow::Result<()> {
    let ctx = PrecisionContext::new(60)?;
    let rhos: Vec<_> = (1..=10).map(|r| ctx.int(r)).collect();
    let eps: Vec<_> = ["0.01", "0.1", "0.5", "1"].iter().map(|e| ctx.parse(e)).collect::<Result<_, _>>()?;
    for name in SURFACE_SET {
        let tableau = ButcherTableau::shipped(&ctx, name)?;
        let cells = sweep_surface(&tableau, &rhos, &eps, &SweepMode::Linearized)?;
        println!("{name}");
        for row in cells.chunks(eps.len()) {
            let hs: Vec<f64> = row.iter().filter_map(|c| c.h_star.as_ref()).map(|h| h.to_f64()).collect();
            let (lo, hi) = hs.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &h| (lo.min(h), hi.max(h)));
            println!(
                "  rho {:>4.1}: h* in [{lo:.6}, {hi:.6}]  rho*h* = {:.4}",
                row[0].rho.to_f64(),
                row[0].rho.to_f64() * lo
            );
        }
    }
    Ok(())
}
