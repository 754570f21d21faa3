//! Model domains, membership predicates and boundary geometry.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::base::ConvexBase;
use crate::error::{Error, Result};
use crate::point::ComplexPoint;
use crate::scaling;

/// Tolerance (max norm) under which a point counts as lying on the boundary
/// of a smooth model domain.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A domain with an exact or semi-exact Kobayashi metric engine.
///
/// JSON form: `{"kind": "<kebab-name>", ...parameters}`; see `schemas/`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", try_from = "RawDomain")]
pub enum ModelDomain {
    UnitDisc,
    PuncturedDisc,
    /// `{ Re z < 0 }`, the universal cover of the punctured disc via `exp`.
    LeftHalfPlane,
    /// `A_R = { 1/R < |z| < R }`.
    Annulus {
        #[serde(rename = "R")]
        r: f64,
    },
    /// `H_R = { -log R < Re z < log R }`.
    Strip {
        #[serde(rename = "R")]
        r: f64,
    },
    UnitBall { n: usize },
    Polydisc { n: usize },
    /// `T_B = B + i R^n`.
    Tube { base: ConvexBase },
    /// `D = exp(T_B)`, the Reinhardt domain with logarithmic image `B`.
    ReinhardtLog { base: ConvexBase },
    /// `Omega_t = A_t^{-1}(Omega_0)` with
    /// `Omega_0 = { -1 + |z|^2 + eps |z - e_1|^4 < 0 }`.
    ScaledEllipsoid { n: usize, eps: f64, t: f64 },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum RawDomain {
    UnitDisc,
    PuncturedDisc,
    LeftHalfPlane,
    Annulus {
        #[serde(rename = "R")]
        r: f64,
    },
    Strip {
        #[serde(rename = "R")]
        r: f64,
    },
    UnitBall { n: usize },
    Polydisc { n: usize },
    Tube { base: ConvexBase },
    ReinhardtLog { base: ConvexBase },
    ScaledEllipsoid { n: usize, eps: f64, t: f64 },
}

impl TryFrom<RawDomain> for ModelDomain {
    type Error = Error;
    fn try_from(raw: RawDomain) -> Result<Self> {
        let d = match raw {
            RawDomain::UnitDisc => Self::UnitDisc,
            RawDomain::PuncturedDisc => Self::PuncturedDisc,
            RawDomain::LeftHalfPlane => Self::LeftHalfPlane,
            RawDomain::Annulus { r } => Self::Annulus { r },
            RawDomain::Strip { r } => Self::Strip { r },
            RawDomain::UnitBall { n } => Self::UnitBall { n },
            RawDomain::Polydisc { n } => Self::Polydisc { n },
            RawDomain::Tube { base } => Self::Tube { base },
            RawDomain::ReinhardtLog { base } => Self::ReinhardtLog { base },
            RawDomain::ScaledEllipsoid { n, eps, t } => Self::ScaledEllipsoid { n, eps, t },
        };
        d.validate()?;
        Ok(d)
    }
}

impl ModelDomain {
    pub fn annulus(r: f64) -> Result<Self> {
        let d = Self::Annulus { r };
        d.validate()?;
        Ok(d)
    }

    pub fn strip(r: f64) -> Result<Self> {
        let d = Self::Strip { r };
        d.validate()?;
        Ok(d)
    }

    pub fn ball(n: usize) -> Self {
        Self::UnitBall { n: n.max(1) }
    }

    pub fn scaled_ellipsoid(n: usize, eps: f64, t: f64) -> Result<Self> {
        let d = Self::ScaledEllipsoid { n, eps, t };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDomain(m.to_string()));
        match self {
            Self::Annulus { r } | Self::Strip { r } if !(r.is_finite() && *r > 1.0) => {
                bad("R must be finite and > 1")
            }
            Self::UnitBall { n } | Self::Polydisc { n } if *n == 0 => bad("dimension must be >= 1"),
            Self::Tube { base } | Self::ReinhardtLog { base } => base.validate(),
            Self::ScaledEllipsoid { n, eps, t } => {
                if *n == 0 {
                    bad("dimension must be >= 1")
                } else if !(eps.is_finite() && *eps >= 0.0) {
                    bad("eps must be >= 0")
                } else if !(0.0..1.0).contains(t) {
                    bad("t must lie in [0, 1)")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::UnitDisc
            | Self::PuncturedDisc
            | Self::LeftHalfPlane
            | Self::Annulus { .. }
            | Self::Strip { .. } => 1,
            Self::UnitBall { n } | Self::Polydisc { n } | Self::ScaledEllipsoid { n, .. } => *n,
            Self::Tube { base } | Self::ReinhardtLog { base } => base.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::UnitDisc => "unit-disc",
            Self::PuncturedDisc => "punctured-disc",
            Self::LeftHalfPlane => "left-half-plane",
            Self::Annulus { .. } => "annulus",
            Self::Strip { .. } => "strip",
            Self::UnitBall { .. } => "unit-ball",
            Self::Polydisc { .. } => "polydisc",
            Self::Tube { .. } => "tube",
            Self::ReinhardtLog { .. } => "reinhardt-log",
            Self::ScaledEllipsoid { .. } => "scaled-ellipsoid",
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Self::LeftHalfPlane | Self::Strip { .. } | Self::Tube { .. })
    }

    /// Boundary is a smooth hypersurface (disc, ball, ellipsoid models).
    pub fn has_smooth_boundary(&self) -> bool {
        matches!(
            self,
            Self::UnitDisc | Self::UnitBall { .. } | Self::ScaledEllipsoid { .. }
        )
    }

    /// Half-width `log R` of the strip or of the logarithmic image of the annulus.
    pub fn log_radius(&self) -> Option<f64> {
        match self {
            Self::Annulus { r } | Self::Strip { r } => Some(r.ln()),
            _ => None,
        }
    }

    /// A canonical interior point.
    pub fn reference_point(&self) -> ComplexPoint {
        let n = self.dim();
        match self {
            Self::PuncturedDisc => ComplexPoint::from_real(&[0.5]),
            Self::LeftHalfPlane => ComplexPoint::from_real(&[-1.0]),
            Self::Annulus { .. } => ComplexPoint::from_real(&[1.0]),
            Self::Tube { base } => ComplexPoint::from_real(&base_center(base)),
            Self::ReinhardtLog { base } => {
                ComplexPoint::from_real(&base_center(base).iter().map(|x| x.exp()).collect::<Vec<_>>())
            }
            _ => ComplexPoint::zeros(n),
        }
    }

    /// `true` iff `z` is an interior point.
    pub fn contains(&self, z: &ComplexPoint) -> Result<bool> {
        z.check_dim(self.dim())?;
        if !z.is_finite() {
            return Ok(false);
        }
        let c = z.coords();
        Ok(match self {
            Self::UnitDisc => c[0].norm_sqr() < 1.0,
            Self::PuncturedDisc => {
                let m = c[0].norm();
                m > 0.0 && m < 1.0
            }
            Self::LeftHalfPlane => c[0].re < 0.0,
            Self::Annulus { r } => {
                let m = c[0].norm();
                m > 1.0 / r && m < *r
            }
            Self::Strip { r } => c[0].re.abs() < r.ln(),
            Self::UnitBall { .. } => z.norm_sqr() < 1.0,
            Self::Polydisc { .. } => c.iter().all(|v| v.norm_sqr() < 1.0),
            Self::Tube { base } => base.contains(&z.re()),
            Self::ReinhardtLog { base } => match log_coordinates(z) {
                Ok(x) => base.contains(&x),
                Err(_) => false,
            },
            Self::ScaledEllipsoid { eps, t, .. } => {
                scaling::scaled_domain_membership(*eps, *t, z).unwrap_or(false)
            }
        })
    }

    /// Error unless `z` is interior.
    pub fn require_interior(&self, z: &ComplexPoint) -> Result<()> {
        if self.contains(z)? {
            Ok(())
        } else {
            Err(Error::NotInterior {
                domain: self.name().to_string(),
                point: z.to_string(),
            })
        }
    }

    /// Distance from `z` to the boundary, positive inside.
    ///
    /// Euclidean for the planar kinds, ball and polydisc; first-order
    /// `|rho| / |grad rho|` estimate for the scaled ellipsoid; for the tube
    /// and the Reinhardt domain the gap is measured in the base (logarithmic
    /// coordinates for the latter). Unbounded kinds report `+inf` for points
    /// running off to infinity only through their finite boundary component.
    pub fn boundary_distance(&self, z: &ComplexPoint) -> Result<f64> {
        z.check_dim(self.dim())?;
        let c = z.coords();
        Ok(match self {
            Self::UnitDisc => 1.0 - c[0].norm(),
            Self::PuncturedDisc => c[0].norm().min(1.0 - c[0].norm()),
            Self::LeftHalfPlane => -c[0].re,
            Self::Annulus { r } => (c[0].norm() - 1.0 / r).min(r - c[0].norm()),
            Self::Strip { r } => r.ln() - c[0].re.abs(),
            Self::UnitBall { .. } => 1.0 - z.norm(),
            Self::Polydisc { .. } => c.iter().map(|v| 1.0 - v.norm()).fold(f64::INFINITY, f64::min),
            Self::Tube { base } => base.boundary_gap(&z.re()),
            Self::ReinhardtLog { base } => {
                if c.iter().any(|v| v.norm() == 0.0) {
                    0.0
                } else {
                    base.boundary_gap(&log_coordinates(z)?)
                }
            }
            Self::ScaledEllipsoid { eps, t, .. } => {
                let f = |p: &ComplexPoint| -> Result<f64> {
                    Ok(ellipsoid_defining_function(*eps, &scaling::scaling_automorphism(*t, p)?))
                };
                let rho = f(z)?;
                let h = 1e-7;
                let mut g2 = 0.0;
                for j in 0..z.dim() {
                    for dir in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
                        let mut p = z.clone();
                        p.0[j] += dir;
                        let mut m = z.clone();
                        m.0[j] -= dir;
                        let d = (f(&p)? - f(&m)?) / (2.0 * h);
                        g2 += d * d;
                    }
                }
                -rho / g2.sqrt().max(f64::MIN_POSITIVE)
            }
        })
    }
}

impl fmt::Display for ModelDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

fn base_center(base: &ConvexBase) -> Vec<f64> {
    match base {
        ConvexBase::Ball { center, .. } => center.clone(),
        ConvexBase::Box { lo, hi } => lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect(),
        ConvexBase::Polytope(p) => {
            let n = base.dim();
            let vs = p.vertices();
            (0..n)
                .map(|j| vs.iter().map(|v| v[j]).sum::<f64>() / vs.len() as f64)
                .collect()
        }
    }
}

/// `(log|z_1|, ..., log|z_n|)`.
pub fn log_coordinates(z: &ComplexPoint) -> Result<Vec<f64>> {
    z.coords()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.norm() == 0.0 {
                Err(Error::ZeroCoordinate { index: i })
            } else {
                Ok(c.norm().ln())
            }
        })
        .collect()
}

/// Coordinate-wise principal logarithm, a point of the tube over the log image.
pub fn principal_log(z: &ComplexPoint) -> Result<ComplexPoint> {
    z.coords()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.norm() == 0.0 {
                Err(Error::ZeroCoordinate { index: i })
            } else {
                Ok(c.ln())
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(ComplexPoint)
}

/// `rho(z) = -1 + |z|^2 + eps |z - e_1|^4`; the model domain is `{rho < 0}`.
pub fn ellipsoid_defining_function(eps: f64, z: &ComplexPoint) -> f64 {
    let d2 = (z - &ComplexPoint::e1(z.dim())).norm_sqr();
    -1.0 + z.norm_sqr() + eps * d2 * d2
}

/// Offset `delta_0` of the ball `B((-delta_0, 0), 1 + delta_0)` containing
/// `Omega_0`. Since `rho >= |z|^2 - 1`, the model ellipsoids lie in the unit
/// ball and the offset is zero for every `eps >= 0`.
pub fn enclosing_ball_offset(eps: f64) -> f64 {
    debug_assert!(eps >= 0.0);
    0.0
}

/// A point on the topological boundary of a model domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub domain: ModelDomain,
    pub point: ComplexPoint,
}

impl BoundaryPoint {
    pub fn new(domain: ModelDomain, point: ComplexPoint) -> Result<Self> {
        point.check_dim(domain.dim())?;
        let gap = domain.boundary_distance(&point)?;
        let tol = if domain.has_smooth_boundary() { BOUNDARY_TOL } else { 1e-9 };
        if gap.abs() > tol {
            return Err(Error::Degenerate(format!(
                "{point} is not on the boundary of {} (gap {gap:.3e})",
                domain.name()
            )));
        }
        Ok(Self { domain, point })
    }

    /// `e_1` on the unit sphere of `C^n`.
    pub fn e1(n: usize) -> Self {
        Self {
            domain: ModelDomain::ball(n),
            point: ComplexPoint::e1(n),
        }
    }
}
