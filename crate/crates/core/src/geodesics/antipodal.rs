//! Antipodal pairs of a convex base and the geodesic lines they span in the
//! Reinhardt domain `exp(T_B)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GeodesicCurve, Interval, Parametrization};
use crate::base::ConvexBase;
use crate::domains::ModelDomain;
use crate::error::{Error, Result};
use crate::point::{dot, norm, ComplexPoint};

/// Boundary points `x`, `y` of `base` with distinct parallel supporting
/// hyperplanes of common normal `normal` (pointing out at `x`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AntipodalPair {
    pub base: ConvexBase,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub normal: Vec<f64>,
}

/// Tolerance of the support-function certificate.
pub const CERTIFICATE_TOL: f64 = 1e-9;

fn certificate_gap(base: &ConvexBase, x: &[f64], y: &[f64], d: &[f64]) -> Option<f64> {
    let l = norm(d);
    if !(l > 0.0) {
        return None;
    }
    let d: Vec<f64> = d.iter().map(|v| v / l).collect();
    let md: Vec<f64> = d.iter().map(|v| -v).collect();
    let hx = base.support(&d);
    let hy = base.support(&md);
    let ex = (dot(&d, x) - hx).abs() / hx.abs().max(1.0);
    let ey = (dot(&md, y) - hy).abs() / hy.abs().max(1.0);
    // the two hyperplanes must differ
    if dot(&d, x) - dot(&d, y) <= CERTIFICATE_TOL {
        return None;
    }
    Some(ex.max(ey))
}

impl AntipodalPair {
    /// Validates the pair; with `normal = None` the normal is searched among
    /// `x - y` and the facet normals of the base.
    pub fn new(base: ConvexBase, x: Vec<f64>, y: Vec<f64>, normal: Option<Vec<f64>>) -> Result<Self> {
        let n = base.dim();
        for v in [&x, &y] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        if x == y {
            return Err(Error::InvalidAntipodal("x = y".into()));
        }
        let candidates = match normal {
            Some(d) => vec![d],
            None => {
                let mut c = vec![x.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<f64>>()];
                c.extend(base.facet_normals());
                c
            }
        };
        for d in candidates {
            if d.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: d.len() });
            }
            if let Some(gap) = certificate_gap(&base, &x, &y, &d) {
                if gap <= CERTIFICATE_TOL {
                    let l = norm(&d);
                    let normal = d.iter().map(|v| v / l).collect();
                    return Ok(Self { base, x, y, normal });
                }
            }
        }
        Err(Error::InvalidAntipodal(format!(
            "no common supporting normal for x = {x:?}, y = {y:?}"
        )))
    }

    /// The diameter of a Euclidean ball base in direction `d`.
    pub fn diameter(base: &ConvexBase, d: &[f64]) -> Result<Self> {
        let ConvexBase::Ball { center, radius } = base else {
            return Err(Error::Unsupported("diameters are defined for ball bases".into()));
        };
        let l = norm(d);
        if d.len() != center.len() || !(l > 0.0) {
            return Err(Error::Degenerate("diameter direction must be a non-zero vector".into()));
        }
        let x = center.iter().zip(d).map(|(c, v)| c + radius * v / l).collect();
        let y = center.iter().zip(d).map(|(c, v)| c - radius * v / l).collect();
        Self::new(base.clone(), x, y, Some(d.to_vec()))
    }
}

/// `t -> exp((x + y) / 2) exp(t (x - y) / 2)` on `(-1, 1)` in
/// `ReinhardtLog(base)`; its logarithmic image is the open segment `(y, x)`.
pub fn antipodal_geodesic(base: &ConvexBase, pair: &AntipodalPair) -> Result<GeodesicCurve> {
    antipodal_geodesic_rotated(base, pair, &vec![0.0; base.dim()])
}

/// [`antipodal_geodesic`] followed by the rotation `z_j -> e^{i theta_j} z_j`,
/// an automorphism of every Reinhardt domain.
pub fn antipodal_geodesic_rotated(base: &ConvexBase, pair: &AntipodalPair, theta: &[f64]) -> Result<GeodesicCurve> {
    if &pair.base != base {
        return Err(Error::InvalidAntipodal("pair belongs to a different base".into()));
    }
    if theta.len() != base.dim() {
        return Err(Error::DimensionMismatch { expected: base.dim(), got: theta.len() });
    }
    if pair.x == pair.y {
        return Err(Error::InvalidAntipodal("x = y".into()));
    }
    let mid: Vec<f64> = pair.x.iter().zip(&pair.y).map(|(a, b)| 0.5 * (a + b)).collect();
    let half: Vec<f64> = pair.x.iter().zip(&pair.y).map(|(a, b)| 0.5 * (a - b)).collect();
    let rot: Vec<Complex64> = theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let (m2, h2, r2) = (mid.clone(), half.clone(), rot.clone());
    let point = move |t: f64| -> ComplexPoint {
        ComplexPoint(
            mid.iter()
                .zip(&half)
                .zip(&rot)
                .map(|((m, h), r)| r * (m + t * h).exp())
                .collect(),
        )
    };
    Ok(GeodesicCurve::new(
        ModelDomain::ReinhardtLog { base: base.clone() },
        Interval::Open { a: -1.0, b: 1.0 },
        Parametrization::Affine,
        format!("antipodal line {:?} -> {:?} rotated by {theta:?}", pair.y, pair.x),
        point,
    )
    .with_derivative(move |t| {
        ComplexPoint(
            m2.iter()
                .zip(&h2)
                .zip(&r2)
                .map(|((m, h), r)| r * (h * (m + t * h).exp()))
                .collect(),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::log_coordinates;

    #[test]
    fn pair_certificates() {
        let b = ConvexBase::unit_ball(2);
        assert!(AntipodalPair::new(b.clone(), vec![1.0, 0.0], vec![-1.0, 0.0], None).is_ok());
        assert!(AntipodalPair::new(b.clone(), vec![1.0, 0.0], vec![0.0, 1.0], None).is_err());
        assert!(AntipodalPair::new(b.clone(), vec![0.5, 0.0], vec![-1.0, 0.0], None).is_err());
        assert!(AntipodalPair::new(b, vec![1.0, 0.0], vec![1.0, 0.0], None).is_err());
        let bx = ConvexBase::boxed(vec![-1.0, -2.0], vec![1.0, 2.0]).unwrap();
        let p = AntipodalPair::new(bx, vec![0.3, 2.0], vec![-0.9, -2.0], None).unwrap();
        assert_eq!(p.normal, vec![0.0, 1.0]);
    }

    #[test]
    fn geodesic_examples() {
        let r = 4f64;
        let iv = ConvexBase::interval(-r.ln(), r.ln()).unwrap();
        let pair = AntipodalPair::new(iv.clone(), vec![r.ln()], vec![-r.ln()], None).unwrap();
        let g = antipodal_geodesic(&iv, &pair).unwrap();
        for t in [-0.5, 0.0, 0.8] {
            assert!((g.sample(t)[0].re - r.powf(t)).abs() < 1e-14);
        }
        let b = ConvexBase::unit_ball(2);
        let pair = AntipodalPair::new(b.clone(), vec![1.0, 0.0], vec![-1.0, 0.0], None).unwrap();
        let g = antipodal_geodesic(&b, &pair).unwrap();
        assert_eq!(g.sample(0.0), ComplexPoint::from_real(&[1.0, 1.0]));
        let t = 0.3f64;
        assert!(g.sample(t).dist(&ComplexPoint::from_real(&[t.exp(), 1.0])) < 1e-15);
        let x = log_coordinates(&g.sample(0.99)).unwrap();
        assert!(b.contains(&x));
        let rot = antipodal_geodesic_rotated(&b, &pair, &[1.0, -2.0]).unwrap();
        assert!((rot.sample(0.4)[1].arg() + 2.0).abs() < 1e-15);
        let other = ConvexBase::ball(vec![0.0, 0.0], 2.0).unwrap();
        assert!(antipodal_geodesic(&other, &pair).is_err());
    }
}
