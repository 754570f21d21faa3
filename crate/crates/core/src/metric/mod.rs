//! Kobayashi distance, infinitesimal metric and hyperbolic length on every
//! model domain.
//!
//! | kind | distance |
//! |---|---|
//! | disc, strip, half-plane, ball, polydisc | closed form |
//! | punctured disc, annulus | deck infimum over `exp` from half-plane / strip |
//! | tube | sandwich of slab projections and analytic discs |
//! | Reinhardt | deck infimum over `exp` from the tube |
//! | scaled ellipsoid | sandwich between the unit ball and an inscribed ball |

pub mod closed;
pub mod deck;
pub mod tube;

use serde::{Deserialize, Serialize};

pub use deck::{deck_infimum, DeckIndex};
pub use tube::{caratheodory_lower, lempert_upper};

use crate::domains::{principal_log, ModelDomain};
use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, SIMPSON_MAX_DEPTH, SIMPSON_TOL};
use crate::point::ComplexPoint;
use crate::scaling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ClosedForm,
    DeckInfimum,
    Sandwich,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::DeckInfimum => "deck-infimum",
            Self::Sandwich => "sandwich",
        }
    }
}

/// A Kobayashi distance together with how it was obtained. For bracketed
/// methods `value` is the midpoint and `gap` the width of the bracket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceValue {
    pub value: f64,
    pub method: Method,
    pub gap: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub deck_index: Option<DeckIndex>,
}

impl DistanceValue {
    pub fn exact(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            gap: 0.0,
            deck_index: None,
        }
    }

    pub fn bracket(lower: f64, upper: f64, method: Method) -> Self {
        let lower = lower.min(upper);
        Self {
            value: 0.5 * (lower + upper),
            method,
            gap: upper - lower,
            deck_index: None,
        }
    }

    pub fn with_deck(mut self, idx: DeckIndex) -> Self {
        self.deck_index = Some(idx);
        self
    }

    pub fn lower(&self) -> f64 {
        self.value - 0.5 * self.gap
    }

    pub fn upper(&self) -> f64 {
        self.value + 0.5 * self.gap
    }
}

/// Knobs of the metric engine.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricOptions {
    /// Largest sandwich gap accepted before [`Error::SandwichGap`] is raised.
    pub max_gap: f64,
    /// Cap on the deck search shells.
    pub lattice_bound: u32,
}

impl Default for MetricOptions {
    fn default() -> Self {
        Self {
            max_gap: 1e-3,
            lattice_bound: 64,
        }
    }
}

impl MetricOptions {
    /// Options accepting any finite bracket.
    pub fn permissive() -> Self {
        Self {
            max_gap: f64::INFINITY,
            ..Self::default()
        }
    }
}

pub fn distance(domain: &ModelDomain, z: &ComplexPoint, w: &ComplexPoint) -> Result<DistanceValue> {
    distance_with(domain, z, w, &MetricOptions::default())
}

pub fn distance_with(
    domain: &ModelDomain,
    z: &ComplexPoint,
    w: &ComplexPoint,
    opts: &MetricOptions,
) -> Result<DistanceValue> {
    domain.require_interior(z)?;
    domain.require_interior(w)?;
    // canonical argument order makes symmetry exact
    let (z, w) = if z.lex_cmp(w).is_gt() { (w, z) } else { (z, w) };
    let d = match domain {
        ModelDomain::UnitDisc => DistanceValue::exact(closed::disc(z[0], w[0]), Method::ClosedForm),
        ModelDomain::LeftHalfPlane => {
            DistanceValue::exact(closed::left_half_plane(z[0], w[0]), Method::ClosedForm)
        }
        ModelDomain::Strip { r } => {
            DistanceValue::exact(closed::strip(-r.ln(), r.ln(), z[0], w[0]), Method::ClosedForm)
        }
        ModelDomain::UnitBall { .. } => DistanceValue::exact(closed::ball(z, w), Method::ClosedForm),
        ModelDomain::Polydisc { .. } => DistanceValue::exact(closed::polydisc(z, w), Method::ClosedForm),
        ModelDomain::PuncturedDisc => {
            let cover = ModelDomain::LeftHalfPlane;
            deck::deck_infimum(&cover, &principal_log(z)?, &principal_log(w)?, opts.lattice_bound)?.0
        }
        ModelDomain::Annulus { r } => {
            let cover = ModelDomain::Strip { r: *r };
            deck::deck_infimum(&cover, &principal_log(z)?, &principal_log(w)?, opts.lattice_bound)?.0
        }
        ModelDomain::Tube { base } => {
            let lo = tube::caratheodory_lower(base, z, w)?;
            let hi = tube::lempert_upper(base, z, w)?;
            DistanceValue::bracket(lo, hi, Method::Sandwich)
        }
        ModelDomain::ReinhardtLog { base } => {
            let cover = ModelDomain::Tube { base: base.clone() };
            deck::deck_infimum(&cover, &principal_log(z)?, &principal_log(w)?, opts.lattice_bound)?.0
        }
        ModelDomain::ScaledEllipsoid { n, eps, t } => {
            let r_in = scaling::inscribed_radius(*n, *eps, *t)?;
            let lo = closed::ball(z, w);
            let hi = if z.norm() < r_in && w.norm() < r_in {
                closed::ball_radius(z, w, r_in)
            } else {
                f64::INFINITY
            };
            DistanceValue::bracket(lo, hi, Method::Sandwich)
        }
    };
    if d.gap > opts.max_gap {
        return Err(Error::SandwichGap {
            gap: d.gap,
            tol: opts.max_gap,
        });
    }
    Ok(d)
}

/// Two-sided bounds on the infinitesimal Kobayashi metric `k(z; v)`; equal
/// for the closed-form and covered kinds.
pub fn infinitesimal_bounds(domain: &ModelDomain, z: &ComplexPoint, v: &ComplexPoint) -> Result<(f64, f64)> {
    domain.require_interior(z)?;
    v.check_dim(domain.dim())?;
    let exact = |x: f64| Ok((x, x));
    match domain {
        ModelDomain::UnitDisc => exact(closed::disc_density(z[0], v[0])),
        ModelDomain::LeftHalfPlane => exact(closed::left_half_plane_density(z[0], v[0])),
        ModelDomain::Strip { r } => exact(closed::strip_density(-r.ln(), r.ln(), z[0], v[0])),
        ModelDomain::UnitBall { .. } => exact(closed::ball_density(z, v)),
        ModelDomain::Polydisc { .. } => exact(closed::polydisc_density(z, v)),
        // coverings are local isometries: pull back through exp
        ModelDomain::PuncturedDisc => {
            exact(closed::left_half_plane_density(z[0].ln(), v[0] / z[0]))
        }
        ModelDomain::Annulus { r } => exact(closed::strip_density(-r.ln(), r.ln(), z[0].ln(), v[0] / z[0])),
        ModelDomain::Tube { base } => tube::infinitesimal_bounds(base, z, v),
        ModelDomain::ReinhardtLog { base } => {
            let u = principal_log(z)?;
            let w = ComplexPoint(v.coords().iter().zip(z.coords()).map(|(a, b)| a / b).collect());
            tube::infinitesimal_bounds(base, &u, &w)
        }
        ModelDomain::ScaledEllipsoid { n, eps, t } => {
            let r_in = scaling::inscribed_radius(*n, *eps, *t)?;
            let lo = closed::ball_density(z, v);
            let hi = if z.norm() < r_in {
                closed::ball_density(&z.scale_re(1.0 / r_in), &v.scale_re(1.0 / r_in))
            } else {
                f64::INFINITY
            };
            Ok((lo, hi))
        }
    }
}

/// `k(z; v)`; the midpoint of the bracket for the sandwiched kinds.
pub fn infinitesimal_metric(domain: &ModelDomain, z: &ComplexPoint, v: &ComplexPoint) -> Result<f64> {
    let (lo, hi) = infinitesimal_bounds(domain, z, v)?;
    Ok(0.5 * (lo + hi))
}

/// A differentiable parametrised curve.
pub trait Curve {
    fn point(&self, t: f64) -> ComplexPoint;
    /// Velocity; central difference with step `1e-6` unless overridden.
    fn velocity(&self, t: f64) -> ComplexPoint {
        let h = 1e-6;
        let a = self.point(t + h);
        let b = self.point(t - h);
        (&a - &b).scale_re(0.5 / h)
    }
}

/// Adapter turning a closure into a [`Curve`] with finite-difference velocity.
pub struct FnCurve<F>(pub F);

impl<F: Fn(f64) -> ComplexPoint> Curve for FnCurve<F> {
    fn point(&self, t: f64) -> ComplexPoint {
        (self.0)(t)
    }
}

/// `l(gamma; [s, t]) = int_s^t k(gamma(u); gamma'(u)) du` by adaptive Simpson.
pub fn hyperbolic_length(domain: &ModelDomain, curve: &dyn Curve, s: f64, t: f64) -> Result<f64> {
    if s > t {
        return Err(Error::Degenerate(format!("length interval [{s}, {t}] is reversed")));
    }
    let integrand = |u: f64| -> Result<f64> {
        let p = curve.point(u);
        if !domain.contains(&p)? {
            return Err(Error::CurveLeftDomain(u));
        }
        infinitesimal_metric(domain, &p, &curve.velocity(u))
    };
    adaptive_simpson(&integrand, s, t, SIMPSON_TOL, SIMPSON_MAX_DEPTH)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::ConvexBase;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn distance_examples() {
        let o = ComplexPoint::zeros(1);
        assert_eq!(distance(&ModelDomain::UnitDisc, &o, &o).unwrap().value, 0.0);
        for r in [0.2, 0.7] {
            let d = distance(&ModelDomain::ball(2), &ComplexPoint::zeros(2), &ComplexPoint::from_real(&[r, 0.0])).unwrap();
            assert!((d.value - r.atanh()).abs() < 1e-14);
            assert_eq!(d.method, Method::ClosedForm);
        }
        let r = 4.0f64;
        let a = ModelDomain::annulus(r).unwrap();
        for (t, s) in [(0.5, 2.0), (0.3, 3.9), (1.0, 1.5)] {
            let d = distance(&a, &ComplexPoint::from_real(&[t]), &ComplexPoint::from_real(&[s])).unwrap();
            let strip = closed::strip(-r.ln(), r.ln(), c(t.ln(), 0.0), c(s.ln(), 0.0));
            assert!((d.value - strip).abs() < 1e-15);
            assert_eq!(d.deck_index.unwrap(), DeckIndex::zero(1));
        }
    }

    #[test]
    fn non_interior_points_are_rejected() {
        let err = distance(&ModelDomain::PuncturedDisc, &ComplexPoint::zeros(1), &ComplexPoint::from_real(&[0.5]));
        assert!(matches!(err, Err(Error::NotInterior { .. })));
    }

    #[test]
    fn infinitesimal_examples() {
        let o = ComplexPoint::zeros(1);
        let one = ComplexPoint::from_real(&[1.0]);
        assert_eq!(infinitesimal_metric(&ModelDomain::UnitDisc, &o, &one).unwrap(), 1.0);
        let z = ComplexPoint::from_real(&[0.3]);
        assert_eq!(infinitesimal_metric(&ModelDomain::UnitDisc, &z, &o).unwrap(), 0.0);
    }

    #[test]
    fn punctured_disc_metric_matches_distance_derivative() {
        let d = ModelDomain::PuncturedDisc;
        for t in [0.1, 0.5, 0.9] {
            let z = ComplexPoint::from_real(&[t]);
            for v in [c(1.0, 0.0), c(0.0, 1.0), c(0.3, -0.7)] {
                let h = 1e-6;
                let w = ComplexPoint::scalar(z[0] + v * h);
                let fd = distance(&d, &z, &w).unwrap().value / h;
                let k = infinitesimal_metric(&d, &z, &ComplexPoint::scalar(v)).unwrap();
                assert!((fd - k).abs() < 1e-5 * k, "{fd} {k}");
            }
        }
    }

    #[test]
    fn radial_length_in_disc() {
        let curve = FnCurve(|u: f64| ComplexPoint::from_real(&[u]));
        let l = hyperbolic_length(&ModelDomain::UnitDisc, &curve, 0.0, 0.5).unwrap();
        assert!((l - 0.5f64.atanh()).abs() < 1e-8);
        let constant = FnCurve(|_u: f64| ComplexPoint::from_real(&[0.2]));
        assert_eq!(hyperbolic_length(&ModelDomain::UnitDisc, &constant, 0.0, 1.0).unwrap(), 0.0);
        let escaping = FnCurve(|u: f64| ComplexPoint::from_real(&[u]));
        assert!(matches!(
            hyperbolic_length(&ModelDomain::UnitDisc, &escaping, 0.0, 1.5),
            Err(Error::CurveLeftDomain(_))
        ));
    }

    #[test]
    fn tube_gap_is_enforced() {
        let t = ModelDomain::Tube { base: ConvexBase::unit_ball(2) };
        let u = ComplexPoint::from_real(&[0.0, 0.8]);
        let v = ComplexPoint::from_real(&[0.5, 0.6]);
        assert!(matches!(distance(&t, &u, &v), Err(Error::SandwichGap { .. })));
        let d = distance_with(&t, &u, &v, &MetricOptions::permissive()).unwrap();
        assert!(d.gap > 1e-3 && d.lower() <= d.upper());
    }

    #[test]
    fn symmetry_is_exact() {
        let a = ModelDomain::annulus(3.0).unwrap();
        let z = ComplexPoint::scalar(c(0.4, 1.1));
        let w = ComplexPoint::scalar(c(-2.0, -0.3));
        assert_eq!(distance(&a, &z, &w).unwrap(), distance(&a, &w, &z).unwrap());
    }
}
