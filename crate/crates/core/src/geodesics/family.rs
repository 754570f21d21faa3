//! Families of geodesics, either finite or generated on demand through any
//! given point.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::antipodal::{antipodal_geodesic_rotated, AntipodalPair};
use super::ball::{ball_geodesic_segment, ball_landing_ray};
use super::planar::{
    disc_radial_ray, punctured_disc_radial_geodesic, strip_horizontal_geodesic, strip_horizontal_parameter,
    strip_vertical_geodesic,
};
use super::{GeodesicCurve, Interval, Parametrization};
use crate::base::ConvexBase;
use crate::domains::{log_coordinates, BoundaryPoint, ModelDomain};
use crate::error::{Error, Result};
use crate::numerics::halton;
use crate::point::ComplexPoint;

/// Serializable description of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilySpec {
    /// Arc-length rays `u -> tanh(u) omega` of the unit disc.
    DiscRadialRays,
    /// Radii `t -> t omega`, `t in (0, 1)`, of the punctured disc.
    PuncturedDiscRadial,
    /// Circles `t -> rho e^{it}`, `t in [0, 2 pi]`, of the punctured disc.
    /// Not geodesics; a negative control.
    CircleArcs,
    /// Vertical lines `s -> t0 + i s` of `H_R`.
    StripVertical {
        #[serde(rename = "R")]
        r: f64,
    },
    /// Horizontal lines of `H_R` by arc length.
    StripHorizontal {
        #[serde(rename = "R")]
        r: f64,
    },
    /// Arc-length rays of the unit ball landing at `landing`.
    BallLanding { n: usize, landing: ComplexPoint },
    /// A single ball segment.
    BallSegment { n: usize, z: ComplexPoint, w: ComplexPoint },
    /// Rotated antipodal lines of `ReinhardtLog(base)` over a Euclidean ball
    /// base; `count` members when enumerated.
    Antipodal { base: ConvexBase, count: usize },
}

/// Common point of the members of a family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Anchor {
    InteriorPoint { point: ComplexPoint },
    BoundaryLanding { point: BoundaryPoint },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FamilySpec", into = "FamilySpec")]
pub struct GeodesicFamily {
    spec: FamilySpec,
}

impl TryFrom<FamilySpec> for GeodesicFamily {
    type Error = Error;
    fn try_from(spec: FamilySpec) -> Result<Self> {
        Self::new(spec)
    }
}

impl From<GeodesicFamily> for FamilySpec {
    fn from(f: GeodesicFamily) -> Self {
        f.spec
    }
}

/// Evenly spaced unit complex numbers.
fn roots(count: usize, offset: f64) -> impl Iterator<Item = Complex64> {
    (0..count).map(move |k| Complex64::from_polar(1.0, offset + TAU * k as f64 / count as f64))
}

impl GeodesicFamily {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        match &spec {
            FamilySpec::StripVertical { r } | FamilySpec::StripHorizontal { r } => {
                ModelDomain::strip(*r)?;
            }
            FamilySpec::BallLanding { n, landing } => {
                BoundaryPoint::new(ModelDomain::ball(*n), landing.clone())?;
            }
            FamilySpec::BallSegment { n, z, w } => {
                ball_geodesic_segment(*n, z, w)?;
            }
            FamilySpec::Antipodal { base, count } => {
                if !matches!(base, ConvexBase::Ball { .. }) {
                    return Err(Error::Unsupported("antipodal families need a ball base".into()));
                }
                if *count == 0 {
                    return Err(Error::Degenerate("empty family".into()));
                }
                base.validate()?;
            }
            _ => {}
        }
        Ok(Self { spec })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn domain(&self) -> ModelDomain {
        match &self.spec {
            FamilySpec::DiscRadialRays => ModelDomain::UnitDisc,
            FamilySpec::PuncturedDiscRadial | FamilySpec::CircleArcs => ModelDomain::PuncturedDisc,
            FamilySpec::StripVertical { r } | FamilySpec::StripHorizontal { r } => ModelDomain::Strip { r: *r },
            FamilySpec::BallLanding { n, .. } | FamilySpec::BallSegment { n, .. } => ModelDomain::ball(*n),
            FamilySpec::Antipodal { base, .. } => ModelDomain::ReinhardtLog { base: base.clone() },
        }
    }

    pub fn anchor(&self) -> Option<Anchor> {
        match &self.spec {
            FamilySpec::DiscRadialRays => Some(Anchor::InteriorPoint { point: ComplexPoint::zeros(1) }),
            FamilySpec::BallLanding { n, landing } => Some(Anchor::BoundaryLanding {
                point: BoundaryPoint {
                    domain: ModelDomain::ball(*n),
                    point: landing.clone(),
                },
            }),
            FamilySpec::BallSegment { z, .. } => Some(Anchor::InteriorPoint { point: z.clone() }),
            _ => None,
        }
    }

    /// Families with a member through every point of the domain.
    pub fn is_generator_backed(&self) -> bool {
        !matches!(self.spec, FamilySpec::BallSegment { .. })
    }

    /// A deterministic selection of `count` members (all members for
    /// finite families).
    pub fn members(&self, count: usize) -> Result<Vec<GeodesicCurve>> {
        match &self.spec {
            FamilySpec::DiscRadialRays => Ok(roots(count, 0.0).map(disc_radial_ray).collect()),
            FamilySpec::PuncturedDiscRadial => roots(count, 0.0)
                .map(|w| punctured_disc_radial_geodesic(w, Parametrization::Affine))
                .collect(),
            FamilySpec::CircleArcs => Ok((0..count)
                .map(|k| circle((k + 1) as f64 / (count + 1) as f64))
                .collect()),
            FamilySpec::StripVertical { r } => {
                let a = r.ln();
                (0..count)
                    .map(|k| strip_vertical_geodesic(*r, -a + 2.0 * a * (k + 1) as f64 / (count + 1) as f64))
                    .collect()
            }
            FamilySpec::StripHorizontal { r } => (0..count)
                .map(|k| strip_horizontal_geodesic(*r, -PI + TAU * k as f64 / count as f64))
                .collect(),
            FamilySpec::BallLanding { n, landing } => {
                let p = BoundaryPoint::new(ModelDomain::ball(*n), landing.clone())?;
                (0..count)
                    .map(|k| ball_landing_ray(*n, &ball_start(*n, k), &p))
                    .collect()
            }
            FamilySpec::BallSegment { n, z, w } => Ok(vec![ball_geodesic_segment(*n, z, w)?]),
            FamilySpec::Antipodal { base, count: total } => {
                let n = base.dim();
                (0..count.min(*total))
                    .map(|k| {
                        let phi = PI * k as f64 / *total as f64;
                        let mut d = vec![0.0; n];
                        d[0] = phi.cos();
                        if n > 1 {
                            d[1] = phi.sin();
                        }
                        let h = halton(k as u64, n);
                        let theta: Vec<f64> = h.iter().map(|v| TAU * v - PI).collect();
                        antipodal_geodesic_rotated(base, &AntipodalPair::diameter(base, &d)?, &theta)
                    })
                    .collect()
            }
        }
    }

    /// A member through `z` with the parameter at which it passes, for
    /// generator-backed families.
    pub fn member_through(&self, z: &ComplexPoint) -> Result<Option<(GeodesicCurve, f64)>> {
        let domain = self.domain();
        domain.require_interior(z)?;
        let polar = |z: Complex64| {
            let m = z.norm();
            if m == 0.0 {
                (0.0, Complex64::new(1.0, 0.0))
            } else {
                (m, z / m)
            }
        };
        Ok(Some(match &self.spec {
            FamilySpec::DiscRadialRays => {
                let (m, w) = polar(z[0]);
                (disc_radial_ray(w), m.atanh())
            }
            FamilySpec::PuncturedDiscRadial => {
                let (m, w) = polar(z[0]);
                (punctured_disc_radial_geodesic(w, Parametrization::Affine)?, m)
            }
            FamilySpec::CircleArcs => (circle(z[0].norm()), z[0].arg().rem_euclid(TAU)),
            FamilySpec::StripVertical { r } => (strip_vertical_geodesic(*r, z[0].re)?, z[0].im),
            FamilySpec::StripHorizontal { r } => (
                strip_horizontal_geodesic(*r, z[0].im)?,
                strip_horizontal_parameter(r.ln(), z[0].re),
            ),
            FamilySpec::BallLanding { n, landing } => {
                let p = BoundaryPoint::new(ModelDomain::ball(*n), landing.clone())?;
                (ball_landing_ray(*n, z, &p)?, 0.0)
            }
            FamilySpec::BallSegment { .. } => return Ok(None),
            FamilySpec::Antipodal { base, .. } => {
                let ConvexBase::Ball { center, radius } = base else {
                    unreachable!("validated at construction")
                };
                let x = log_coordinates(z)?;
                let off: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let l = crate::point::norm(&off);
                let d = if l < 1e-12 {
                    let mut e = vec![0.0; x.len()];
                    e[0] = 1.0;
                    e
                } else {
                    off.iter().map(|v| v / l).collect()
                };
                let theta: Vec<f64> = z.coords().iter().map(|c| c.arg()).collect();
                let pair = AntipodalPair::diameter(base, &d)?;
                (antipodal_geodesic_rotated(base, &pair, &theta)?, l / radius)
            }
        }))
    }
}

fn circle(rho: f64) -> GeodesicCurve {
    GeodesicCurve::new(
        ModelDomain::PuncturedDisc,
        Interval::Segment { a: 0.0, b: TAU },
        Parametrization::Affine,
        format!("circle |z| = {rho}"),
        move |t| ComplexPoint::scalar(Complex64::from_polar(rho, t)),
    )
}

/// Starting points of the enumerated ball rays: the origin, then the
/// Halton points falling in `B(0, 0.9)`.
fn ball_start(n: usize, k: usize) -> ComplexPoint {
    if k == 0 {
        return ComplexPoint::zeros(n);
    }
    (0u64..)
        .map(|i| {
            let h = halton(i, 2 * n);
            ComplexPoint(
                (0..n)
                    .map(|j| Complex64::new(2.0 * h[2 * j] - 1.0, 2.0 * h[2 * j + 1] - 1.0) * 0.9)
                    .collect(),
            )
        })
        .filter(|p| p.norm() < 0.9)
        .nth(k - 1)
        .expect("the Halton sequence is dense")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_through_passes_through() {
        let specs = vec![
            (FamilySpec::DiscRadialRays, ComplexPoint::scalar(Complex64::new(0.3, -0.5))),
            (FamilySpec::PuncturedDiscRadial, ComplexPoint::scalar(Complex64::new(-0.2, 0.1))),
            (FamilySpec::CircleArcs, ComplexPoint::scalar(Complex64::new(-0.2, -0.1))),
            (FamilySpec::StripVertical { r: 4.0 }, ComplexPoint::scalar(Complex64::new(0.9, -7.0))),
            (FamilySpec::StripHorizontal { r: 4.0 }, ComplexPoint::scalar(Complex64::new(-1.2, 2.0))),
            (
                FamilySpec::BallLanding { n: 2, landing: ComplexPoint::e1(2) },
                ComplexPoint::from_real(&[0.1, 0.4]),
            ),
            (
                FamilySpec::Antipodal { base: ConvexBase::unit_ball(2), count: 20 },
                ComplexPoint::new(vec![Complex64::from_polar(1.2, 0.4), Complex64::from_polar(0.7, -2.0)]),
            ),
        ];
        for (spec, z) in specs {
            let f = GeodesicFamily::new(spec).unwrap();
            let (g, t) = f.member_through(&z).unwrap().unwrap();
            assert!(g.interval.contains(t));
            assert!(g.sample(t).dist(&z) < 1e-12, "{}: {}", g.label, g.sample(t).dist(&z));
        }
    }

    #[test]
    fn enumerations() {
        let f = GeodesicFamily::new(FamilySpec::Antipodal { base: ConvexBase::unit_ball(2), count: 20 }).unwrap();
        let m = f.members(100).unwrap();
        assert_eq!(m.len(), 20);
        let b = GeodesicFamily::new(FamilySpec::BallLanding { n: 2, landing: ComplexPoint::e1(2) }).unwrap();
        for g in b.members(10).unwrap() {
            assert!(g.sample(20.0).dist(&ComplexPoint::e1(2)) < 1e-6);
        }
        let s = GeodesicFamily::new(FamilySpec::BallSegment {
            n: 2,
            z: ComplexPoint::zeros(2),
            w: ComplexPoint::from_real(&[0.5, 0.0]),
        })
        .unwrap();
        assert!(!s.is_generator_backed());
        assert!(s.member_through(&ComplexPoint::zeros(2)).unwrap().is_none());
    }

    #[test]
    fn json_round_trip() {
        let f = GeodesicFamily::new(FamilySpec::StripVertical { r: 4.0 }).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"kind":"strip-vertical","R":4.0}"#);
        let back: GeodesicFamily = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<GeodesicFamily>(r#"{"kind":"strip-vertical","R":0.5}"#).is_err());
    }
}
