//! Geodesics of the planar model domains: disc, strip `H_R`, punctured disc
//! and annulus.
//!
//! On the strip `{|Re| < a}` the real axis has density
//! `pi / (4a) sec(pi x / (2a))`, whose arc-length inverse is
//! `x(u) = (4a / pi) atan(tanh u)`. On the left half-plane the negative real
//! axis has density `1 / (2|x|)`, so `x(u) = -exp(-2u)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{GeodesicCurve, Interval, Parametrization};
use crate::domains::ModelDomain;
use crate::error::{Error, Result};
use crate::point::ComplexPoint;

fn unit(omega: Complex64) -> Result<Complex64> {
    if (omega.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Degenerate(format!("direction {omega} is not unimodular")));
    }
    Ok(omega)
}

fn strip_half_width(r: f64) -> Result<f64> {
    ModelDomain::strip(r)?;
    Ok(r.ln())
}

/// `u -> tanh(u) omega` in the unit disc.
pub fn disc_radial_ray(omega: Complex64) -> GeodesicCurve {
    let omega = omega / omega.norm();
    GeodesicCurve::new(
        ModelDomain::UnitDisc,
        Interval::Ray,
        Parametrization::ArcLength,
        format!("disc ray to {omega}"),
        move |u| ComplexPoint::scalar(omega * u.tanh()),
    )
    .with_derivative(move |u| ComplexPoint::scalar(omega / u.cosh().powi(2)))
}

/// The vertical line `s -> t0 + i s` in `H_R`, affinely parametrised.
/// Only the midline `t0 = 0` is a geodesic of the strip.
pub fn strip_vertical_geodesic(r: f64, t0: f64) -> Result<GeodesicCurve> {
    let a = strip_half_width(r)?;
    if t0.abs() >= a {
        return Err(Error::Degenerate(format!("t0 = {t0} outside (-log R, log R)")));
    }
    Ok(GeodesicCurve::new(
        ModelDomain::Strip { r },
        Interval::Line,
        Parametrization::Affine,
        format!("vertical line Re = {t0}"),
        move |s| ComplexPoint::scalar(Complex64::new(t0, s)),
    )
    .with_derivative(|_| ComplexPoint::scalar(Complex64::new(0.0, 1.0))))
}

/// The horizontal line `Im = s0` of `H_R` by arc length, crossing the
/// midline at parameter 0.
pub fn strip_horizontal_geodesic(r: f64, s0: f64) -> Result<GeodesicCurve> {
    let a = strip_half_width(r)?;
    let k = 4.0 * a / PI;
    Ok(GeodesicCurve::new(
        ModelDomain::Strip { r },
        Interval::Line,
        Parametrization::ArcLength,
        format!("horizontal line Im = {s0}"),
        move |u| ComplexPoint::scalar(Complex64::new(k * u.tanh().atan(), s0)),
    )
    .with_derivative(move |u| ComplexPoint::scalar(Complex64::new(k / (2.0 * u).cosh(), 0.0))))
}

/// Arc-length parameter of the point `x + i s0` on [`strip_horizontal_geodesic`].
pub(crate) fn strip_horizontal_parameter(a: f64, x: f64) -> f64 {
    (PI * x / (4.0 * a)).tan().atanh()
}

/// The horizontal line `x -> x + i s0`, `x in (-log R, log R)`.
pub fn strip_horizontal_affine(r: f64, s0: f64) -> Result<GeodesicCurve> {
    let a = strip_half_width(r)?;
    Ok(GeodesicCurve::new(
        ModelDomain::Strip { r },
        Interval::Open { a: -a, b: a },
        Parametrization::Affine,
        format!("horizontal segment Im = {s0}"),
        move |x| ComplexPoint::scalar(Complex64::new(x, s0)),
    )
    .with_derivative(|_| ComplexPoint::scalar(Complex64::new(1.0, 0.0))))
}

/// The radius of the punctured disc in direction `omega`: `t -> t omega`
/// on `(0, 1)`, or `u -> exp(-exp(-2u)) omega` by arc length.
pub fn punctured_disc_radial_geodesic(omega: Complex64, param: Parametrization) -> Result<GeodesicCurve> {
    let omega = unit(omega)?;
    let label = format!("punctured-disc radius {omega}");
    Ok(match param {
        Parametrization::Affine => GeodesicCurve::new(
            ModelDomain::PuncturedDisc,
            Interval::Open { a: 0.0, b: 1.0 },
            param,
            label,
            move |t| ComplexPoint::scalar(omega * t),
        )
        .with_derivative(move |_| ComplexPoint::scalar(omega)),
        Parametrization::ArcLength => GeodesicCurve::new(
            ModelDomain::PuncturedDisc,
            Interval::Line,
            param,
            label,
            move |u| ComplexPoint::scalar(omega * (-(-2.0 * u).exp()).exp()),
        )
        .with_derivative(move |u| {
            let x = -(-2.0 * u).exp();
            ComplexPoint::scalar(omega * x.exp() * (-2.0 * x))
        }),
    })
}

/// The radius of `A_R` in direction `omega`: `t -> R^t omega` on `(-1, 1)`,
/// or the image of [`strip_horizontal_geodesic`] by arc length.
pub fn annulus_radial_geodesic(r: f64, omega: Complex64, param: Parametrization) -> Result<GeodesicCurve> {
    let omega = unit(omega)?;
    let a = ModelDomain::annulus(r).map(|_| r.ln())?;
    let label = format!("annulus radius {omega}");
    Ok(match param {
        Parametrization::Affine => GeodesicCurve::new(
            ModelDomain::Annulus { r },
            Interval::Open { a: -1.0, b: 1.0 },
            param,
            label,
            move |t| ComplexPoint::scalar(omega * (a * t).exp()),
        ),
        Parametrization::ArcLength => {
            let k = 4.0 * a / PI;
            GeodesicCurve::new(ModelDomain::Annulus { r }, Interval::Line, param, label, move |u| {
                ComplexPoint::scalar(omega * (k * u.tanh().atan()).exp())
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::distance;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_arc_length(g: &GeodesicCurve, pairs: &[(f64, f64)]) {
        for &(s, t) in pairs {
            let d = distance(&g.domain, &g.sample(s), &g.sample(t)).unwrap().value;
            assert!((d - (t - s).abs()).abs() < 1e-9, "{}: {d} vs {}", g.label, (t - s).abs());
        }
    }

    #[test]
    fn vertical_line_examples() {
        let e = std::f64::consts::E;
        let mid = strip_vertical_geodesic(e, 0.0).unwrap();
        assert_eq!(mid.sample(2.0)[0], c(0.0, 2.0));
        let off = strip_vertical_geodesic(e, 0.5).unwrap();
        assert_eq!(off.sample(-1.0)[0], c(0.5, -1.0));
        assert!(strip_vertical_geodesic(e, 1.0).is_err());
    }

    #[test]
    fn arc_length_laws() {
        let pairs = [(0.0, 1.0), (-2.0, 0.5), (1.5, 4.0), (-3.0, -2.9)];
        check_arc_length(&strip_horizontal_geodesic(4.0, 0.7).unwrap(), &pairs);
        check_arc_length(&punctured_disc_radial_geodesic(c(0.6, 0.8), Parametrization::ArcLength).unwrap(), &pairs);
        check_arc_length(&annulus_radial_geodesic(4.0, c(0.0, -1.0), Parametrization::ArcLength).unwrap(), &pairs);
        check_arc_length(&disc_radial_ray(c(0.0, 1.0)), &[(0.0, 1.0), (0.5, 3.0)]);
    }

    #[test]
    fn horizontal_parameter_inverts() {
        let g = strip_horizontal_geodesic(3.0, 0.0).unwrap();
        for u in [-2.0, 0.0, 0.3, 4.0] {
            let x = g.sample(u)[0].re;
            assert!((strip_horizontal_parameter(3f64.ln(), x) - u).abs() < 1e-9);
        }
    }

    #[test]
    fn annulus_affine_is_power_of_r() {
        let r = 4.0;
        let g = annulus_radial_geodesic(r, c(1.0, 0.0), Parametrization::Affine).unwrap();
        for t in [-0.9, 0.0, 0.5] {
            assert!((g.sample(t)[0].re - r.powf(t)).abs() < 1e-14);
        }
    }
}
