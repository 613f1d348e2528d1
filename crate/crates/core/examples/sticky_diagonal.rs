//! An Euler orbit started 1e-4 off the transcritical diagonal, run at
//! double-like precision and at 50 digits.

use canardlab::analysis::{classify_from, classify_visiting, default_max_n, transversal_deviation};
use canardlab::schemes::{Scheme, Stepper};
use canardlab::systems::{PlanarPoint, SingularityKind, SystemParams};
use canardlab::PrecisionContext;

fn main() -> anyhow::Result<()> {
    for digits in [16, 50] {
        let ctx = PrecisionContext::new(digits)?;
        let params = SystemParams::new(ctx.parse("1e-2")?, ctx.parse("1e-4")?)?;
        let stepper = Stepper::new(SingularityKind::Transcritical, Scheme::Euler, params.clone())?;
        let start = PlanarPoint::new(ctx.int(-1), ctx.parse("-0.9999")?);
        let escape = ctx.one();
        let max_n = default_max_n(&params, &escape);

        let mut closest = ctx.one();
        let mut last = start.clone();
        let class = classify_visiting(&stepper, start.clone(), &escape, max_n, |_, p| {
            let d = transversal_deviation(SingularityKind::Transcritical, &params, p).abs();
            if d < closest {
                closest = d;
            }
            last = p.clone();
        })?;
        assert_eq!(class, classify_from(&stepper, start, &escape, max_n)?);
        println!(
            "{digits:>2} digits: {class:<5} closest approach {:.3}, final point ({:.6}, {:.6})",
            closest, last.x, last.y
        );
    }
    Ok(())
}
