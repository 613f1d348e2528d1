//! Way-out indices: the Kahan map returns exactly as many steps after the
//! symmetry center as it spent before it; forward Euler does not.

use canardlab::analysis::wayout;
use canardlab::schemes::Scheme;
use canardlab::systems::{SingularityKind, SystemParams};
use canardlab::verify::lattice_rho;
use canardlab::PrecisionContext;

fn main() -> anyhow::Result<()> {
    let ctx = PrecisionContext::new(60)?;
    let params = SystemParams::new(ctx.parse("0.01")?, ctx.parse("0.1")?)?;
    for kind in SingularityKind::ALL {
        for n in [1, 10, 100] {
            let rho = lattice_rho(kind, &params, n);
            let r = wayout(kind, &Scheme::Kahan, &params, &rho, 10_000)?;
            println!("kahan {kind:<13} N {n:>3}: psi {:>3}", r.psi);
        }
        let rho = lattice_rho(kind, &params, 10) + &params.h * &params.epsilon / 3;
        let r = wayout(kind, &Scheme::Kahan, &params, &rho, 10_000)?;
        println!("kahan {kind:<13} off lattice N {}: psi {}", r.n_in, r.psi);
    }
    for rho in ["0.05", "0.1", "0.2"] {
        let rho = ctx.parse(rho)?;
        let r = wayout(SingularityKind::Transcritical, &Scheme::Euler, &params, &rho, 100_000)?;
        println!(
            "euler transcritical rho {:<4}: N {:>3} psi {:>3} exit {:>3}",
            rho.to_decimal(3),
            r.n_in,
            r.psi,
            r.exit_k
        );
    }
    Ok(())
}
