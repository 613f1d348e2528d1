//! The implicit pitchfork family: the multiplier increases along the
//! canard below a = 2/(h^2 eps), is constant there, and decreases above.

use canardlab::linearization::jacobian_factor;
use canardlab::schemes::Scheme;
use canardlab::systems::{SingularityKind, SystemParams};
use canardlab::PrecisionContext;

fn main() -> anyhow::Result<()> {
    let ctx = PrecisionContext::new(50)?;
    let params = SystemParams::new(ctx.parse("0.5")?, ctx.parse("0.2")?)?;
    let threshold = 2 / (params.h.square() * &params.epsilon);
    let ds = ctx.pow10(-20);
    println!("threshold a = {threshold:.6}");
    for a in [ctx.ratio(-1, 2), ctx.ratio(1, 2), &threshold - 1, threshold.clone(), &threshold + 1] {
        let scheme = Scheme::AFamily(a.clone());
        let mut slopes = Vec::new();
        for s in [-3, -1, 1, 3] {
            let s = ctx.int(s);
            let j = |x| jacobian_factor(SingularityKind::Pitchfork, &scheme, &params, &x);
            let slope = (j(&s + &ds)? - j(&s - &ds)?) / (&ds * 2);
            slopes.push(format!("{:>+10.4}", slope.to_f64()));
        }
        println!("a {:>8.3}: dJ/ds at s = -3, -1, 1, 3: {}", a.to_f64(), slopes.join(" "));
    }
    Ok(())
}
