use crate::error::Result;
use crate::precision::Scalar;
use crate::systems::{Orbit, PlanarPoint};

/// `n` steps of `step` from `p0`. A failing step at point `k` is reported
/// with index `k`.
pub fn iterate<F>(step: F, p0: PlanarPoint, n: usize) -> Result<Orbit>
where
    F: FnMut(&PlanarPoint) -> Result<PlanarPoint>,
{
    iterate_until(step, p0, n, |_, _| false)
}

/// Like [`iterate`] but ends early at the first point (index `k`, point) for
/// which `stop` holds; that point is kept and its index recorded.
pub fn iterate_until<F, S>(mut step: F, p0: PlanarPoint, n: usize, mut stop: S) -> Result<Orbit>
where
    F: FnMut(&PlanarPoint) -> Result<PlanarPoint>,
    S: FnMut(usize, &PlanarPoint) -> bool,
{
    let mut points = Vec::with_capacity(n.min(1 << 20) + 1);
    if stop(0, &p0) {
        return Ok(Orbit {
            points: vec![p0],
            stopped_at: Some(0),
        });
    }
    points.push(p0);
    for k in 0..n {
        let next = step(&points[k]).map_err(|e| e.at_index(k))?;
        let fire = stop(k + 1, &next);
        points.push(next);
        if fire {
            return Ok(Orbit {
                points,
                stopped_at: Some(k + 1),
            });
        }
    }
    Ok(Orbit {
        points,
        stopped_at: None,
    })
}

/// Stop rule `|x| > radius`.
pub fn escape_rule(radius: Scalar) -> impl FnMut(usize, &PlanarPoint) -> bool {
    move |_, p| p.x.abs() > radius
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::precision::{approx_eq, PrecisionContext};
    use crate::schemes::{euler_step, kahan_step_fold, kahan_step_transcritical};
    use crate::systems::{SingularityKind, SystemParams};

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(50).unwrap()
    }

    #[test]
    fn euler_diagonal_orbit() {
        let c = ctx();
        let params = SystemParams::new(c.parse("0.01").unwrap(), c.parse("0.1").unwrap()).unwrap();
        let orbit = iterate(
            |p| Ok(euler_step(SingularityKind::Transcritical, &params, p)),
            PlanarPoint::new(c.int(-1), c.int(-1)),
            3,
        )
        .unwrap();
        assert_eq!(orbit.len(), 4);
        for (p, want) in orbit.points.iter().zip(["-1", "-0.999", "-0.998", "-0.997"]) {
            assert!(approx_eq(&p.x, &c.parse(want).unwrap(), &c.tolerance()));
            assert_eq!(p.x, p.y);
        }
        assert_eq!(orbit.stopped_at, None);
    }

    #[test]
    fn kahan_fold_stays_on_the_parabola() {
        let c = ctx();
        let params = SystemParams::new(c.parse("0.01").unwrap(), c.parse("0.1").unwrap()).unwrap();
        let offset = crate::systems::fold_parabola_offset(&params);
        let x0 = c.parse("-0.3").unwrap();
        let p0 = PlanarPoint::new(x0.clone(), x0.square() - &offset);
        let orbit = iterate(|p| kahan_step_fold(&params, p), p0, 100).unwrap();
        for p in &orbit.points {
            assert!((&p.y - p.x.square() + &offset).abs() <= c.tolerance());
        }
    }

    #[test]
    fn escape_index_is_recorded() {
        let c = PrecisionContext::new(30).unwrap();
        let params = SystemParams::new(c.parse("0.1").unwrap(), c.parse("0.1").unwrap()).unwrap();
        let p0 = PlanarPoint::new(c.int(-1), c.parse("-0.9").unwrap());
        let orbit = iterate_until(
            |p| Ok(euler_step(SingularityKind::Transcritical, &params, p)),
            p0,
            100_000,
            escape_rule(c.int(3)),
        )
        .unwrap();
        let k = orbit.stopped_at.expect("escapes");
        assert_eq!(orbit.len(), k + 1);
        assert!(orbit.last().x.abs() > 3);
        assert!(orbit.points[k - 1].x.abs() <= 3);
    }

    #[test]
    fn pole_reports_its_index() {
        let c = ctx();
        let params = SystemParams::relaxed(c.zero(), c.one());
        // Start on the pole x = 1/h.
        let err = iterate(|p| kahan_step_transcritical(&params, p), PlanarPoint::new(c.one(), c.zero()), 5);
        assert_eq!(err.unwrap_err(), Error::Pole { index: Some(0) });
    }
}
