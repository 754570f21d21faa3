//! Geodesics of the unit ball, obtained by transporting the radial
//! geodesic `u -> tanh(u) xi` with the involution `phi_z`.

use num_complex::Complex64;

use super::{GeodesicCurve, Interval, Parametrization};
use crate::domains::{BoundaryPoint, ModelDomain};
use crate::error::{Error, Result};
use crate::metric::closed::{ball, ball_involution};
use crate::point::ComplexPoint;

fn check_interior(n: usize, z: &ComplexPoint) -> Result<()> {
    z.check_dim(n)?;
    ModelDomain::ball(n).require_interior(z)
}

fn check_sphere(n: usize, p: &BoundaryPoint) -> Result<ComplexPoint> {
    p.point.check_dim(n)?;
    if (p.point.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Degenerate(format!("{} is not on the unit sphere", p.point)));
    }
    Ok(p.point.clone())
}

fn transported(n: usize, z: ComplexPoint, xi: ComplexPoint, interval: Interval, label: String) -> GeodesicCurve {
    GeodesicCurve::new(ModelDomain::ball(n), interval, Parametrization::ArcLength, label, move |u| {
        ball_involution(&z, &xi.scale_re(u.tanh()))
    })
}

/// Arc-length segment from `z` (parameter 0) to `w` (parameter `K(z, w)`).
pub fn ball_geodesic_segment(n: usize, z: &ComplexPoint, w: &ComplexPoint) -> Result<GeodesicCurve> {
    check_interior(n, z)?;
    check_interior(n, w)?;
    let label = format!("ball segment {z} -> {w}");
    if z == w {
        let p = z.clone();
        return Ok(GeodesicCurve::new(
            ModelDomain::ball(n),
            Interval::Segment { a: 0.0, b: 0.0 },
            Parametrization::ArcLength,
            label,
            move |_| p.clone(),
        ));
    }
    let q = ball_involution(z, w);
    let xi = q.scale_re(1.0 / q.norm());
    let t = ball(z, w);
    Ok(transported(n, z.clone(), xi, Interval::Segment { a: 0.0, b: t }, label))
}

/// Arc-length ray from `z` landing at the sphere point `p`.
pub fn ball_landing_ray(n: usize, z: &ComplexPoint, p: &BoundaryPoint) -> Result<GeodesicCurve> {
    check_interior(n, z)?;
    let p = check_sphere(n, p)?;
    let xi = ball_involution(z, &p);
    let xi = xi.scale_re(1.0 / xi.norm());
    Ok(transported(n, z.clone(), xi, Interval::Ray, format!("ball ray {z} -> {p}")))
}

/// The affine complex geodesic `zeta -> base + (center + radius zeta) e`:
/// the slice of the ball by the complex line through `base` with unit
/// direction `e`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGeodesic {
    pub base: ComplexPoint,
    pub direction: ComplexPoint,
    pub center: Complex64,
    pub radius: f64,
}

impl ComplexGeodesic {
    pub fn apply(&self, zeta: Complex64) -> ComplexPoint {
        &self.base + &self.direction.scale(self.center + zeta * self.radius)
    }

    /// Disc coordinate of a point of the complex line.
    pub fn preimage(&self, w: &ComplexPoint) -> Complex64 {
        ((w - &self.base).inner(&self.direction) - self.center) / self.radius
    }

    /// Euclidean distance from `w` to the complex line.
    pub fn distance_to_line(&self, w: &ComplexPoint) -> f64 {
        let d = w - &self.base;
        let along = self.direction.scale(d.inner(&self.direction));
        (&d - &along).norm()
    }
}

/// The complex geodesic through the interior point `z` whose closure
/// contains the sphere point `p`.
pub fn ball_complex_geodesic(n: usize, z: &ComplexPoint, p: &BoundaryPoint) -> Result<ComplexGeodesic> {
    check_interior(n, z)?;
    let p = check_sphere(n, p)?;
    let diff = &p - z;
    let e = diff.scale_re(1.0 / diff.norm());
    // |z + l e|^2 < 1  <=>  |l + <z, e>|^2 < 1 - |z|^2 + |<z, e>|^2
    let ze = z.inner(&e);
    let radius = ((1.0 - z.norm_sqr()) + ze.norm_sqr()).sqrt();
    Ok(ComplexGeodesic {
        base: z.clone(),
        direction: e,
        center: -ze,
        radius,
    })
}
