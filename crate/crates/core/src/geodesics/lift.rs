//! Lifting curves through the implemented coverings by continuous
//! continuation of logarithms.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::{nan_point, GeodesicCurve};
use crate::coverings::{HolomorphicMap, IntegerMatrix};
use crate::domains::principal_log;
use crate::error::{Error, Result};
use crate::point::ComplexPoint;
use crate::scaling;

/// Parameter step before halving.
const BASE_STEP: f64 = 1.0 / 32.0;
/// Steps are halved at most this many times.
const MAX_HALVINGS: u32 = 16;

#[derive(Clone)]
enum Tracker {
    /// the cover point is the logarithm itself
    Exp,
    /// the cover point is `exp(L)` with `A L = log gamma`
    Monomial(IntegerMatrix),
    Identity,
    BallInverse(f64),
}

/// `Log(b / a)` coordinate-wise; `None` when some argument jump exceeds
/// `pi / 2`.
fn log_ratio(a: &ComplexPoint, b: &ComplexPoint) -> Option<Vec<Complex64>> {
    let out: Vec<Complex64> = a.coords().iter().zip(b.coords()).map(|(p, q)| (q / p).ln()).collect();
    (out.iter().all(|c| c.im.abs() <= FRAC_PI_2 && c.is_finite())).then_some(out)
}

/// Continues the logarithm `log0` of `curve(anchor)` to `curve(t)`.
fn continue_log(curve: &GeodesicCurve, anchor: f64, log0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    let base_steps = ((t - anchor).abs() / BASE_STEP).ceil().max(1.0) as usize;
    'halving: for h in 0..=MAX_HALVINGS {
        let steps = base_steps << h;
        let mut acc = log0.to_vec();
        let mut prev = curve.sample(anchor);
        for k in 1..=steps {
            let s = anchor + (t - anchor) * k as f64 / steps as f64;
            let next = curve.sample(s);
            let Some(step) = log_ratio(&prev, &next) else {
                continue 'halving;
            };
            acc.iter_mut().zip(step).for_each(|(a, d)| *a += d);
            prev = next;
        }
        return Ok(acc);
    }
    Err(Error::Lift(format!("branch tracking failed between {anchor} and {t}")))
}

fn lifted_point(tracker: &Tracker, curve: &GeodesicCurve, anchor: f64, log0: &[Complex64], t: f64) -> Result<ComplexPoint> {
    match tracker {
        Tracker::Identity => Ok(curve.sample(t)),
        Tracker::BallInverse(s) => scaling::scaling_inverse(*s, &curve.sample(t)),
        Tracker::Exp => Ok(ComplexPoint(continue_log(curve, anchor, log0, t)?)),
        Tracker::Monomial(a) => {
            let l = continue_log(curve, anchor, log0, t)?;
            Ok(ComplexPoint(a.solve_complex(&l)?.into_iter().map(|c| c.exp()).collect()))
        }
    }
}

/// Lift of `curve` through `covering` with `lift(anchor) = base_preimage`.
///
/// The lift keeps the interval and parametrisation of `curve`: coverings
/// are local isometries, so lifts of geodesics are geodesics.
pub fn lift_geodesic(
    covering: &HolomorphicMap,
    curve: &GeodesicCurve,
    anchor: f64,
    base_preimage: &ComplexPoint,
) -> Result<GeodesicCurve> {
    let source = covering.source()?;
    let target = covering.target()?;
    if curve.domain != target {
        return Err(Error::Lift(format!(
            "curve lives in {} but the covering maps onto {}",
            curve.domain.name(),
            target.name()
        )));
    }
    source.require_interior(base_preimage)?;
    let image = covering.apply_raw(base_preimage)?;
    let at = curve.sample(anchor);
    if image.max_abs_diff(&at) > 1e-10 * (1.0 + at.norm()) {
        return Err(Error::Lift(format!("{base_preimage} does not map to the curve point {at}")));
    }
    let (tracker, log0) = match covering {
        HolomorphicMap::ExpCover { .. } => (Tracker::Exp, base_preimage.coords().to_vec()),
        HolomorphicMap::Power { .. } | HolomorphicMap::Monomial { .. } => {
            let a = covering.monomial_matrix().expect("monomial map");
            let l = principal_log(base_preimage)?;
            // log gamma(anchor) on the branch selected by the preimage
            let rows = a.rows();
            let lg: Vec<Complex64> = rows
                .iter()
                .map(|r| r.iter().zip(l.coords()).map(|(&k, c)| c * k as f64).sum())
                .collect();
            (Tracker::Monomial(a), lg)
        }
        HolomorphicMap::Identity { .. } => (Tracker::Identity, Vec::new()),
        HolomorphicMap::BallMobius { t, .. } => (Tracker::BallInverse(*t), Vec::new()),
        HolomorphicMap::Compose { .. } => {
            return Err(Error::Unsupported("lifting through compositions".into()));
        }
    };
    // fail early on a compact window
    let (lo, hi) = curve.interval.window(5.0);
    for t in [lo, hi] {
        lifted_point(&tracker, curve, anchor, &log0, t)?;
    }
    let inner = curve.clone();
    let n = source.dim();
    Ok(GeodesicCurve::new(
        source,
        curve.interval,
        curve.parametrization,
        format!("lift of {} through {}", curve.label, covering.name()),
        move |t| lifted_point(&tracker, &inner, anchor, &log0, t).unwrap_or_else(|_| nan_point(n)),
    ))
}
