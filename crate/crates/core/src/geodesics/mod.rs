//! Geodesic segments, rays and lines in the model domains.

mod antipodal;
mod ball;
mod family;
mod lift;
mod planar;

use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use antipodal::{antipodal_geodesic, antipodal_geodesic_rotated, AntipodalPair};
pub use ball::{ball_complex_geodesic, ball_geodesic_segment, ball_landing_ray, ComplexGeodesic};
pub use family::{Anchor, FamilySpec, GeodesicFamily};
pub use lift::lift_geodesic;
pub use planar::{
    annulus_radial_geodesic, disc_radial_ray, punctured_disc_radial_geodesic, strip_horizontal_geodesic,
    strip_horizontal_affine, strip_vertical_geodesic,
};

use crate::domains::{log_coordinates, BoundaryPoint, ModelDomain};
use crate::error::{Error, Result};
use crate::metric::{self, hyperbolic_length, Curve, MetricOptions};
use crate::point::ComplexPoint;
use crate::scaling;

/// Parameter interval of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Interval {
    /// `[a, b]`
    Segment { a: f64, b: f64 },
    /// `[0, inf)`
    Ray,
    /// the real line
    Line,
    /// `(a, b)`, for affinely parametrised lines
    Open { a: f64, b: f64 },
}

impl Interval {
    pub fn contains(&self, t: f64) -> bool {
        match *self {
            Self::Segment { a, b } => a <= t && t <= b,
            Self::Ray => t >= 0.0,
            Self::Line => t.is_finite(),
            Self::Open { a, b } => a < t && t < b,
        }
    }

    /// A compact parameter window: the segment itself, `[0, h]` for rays,
    /// `[-h, h]` for lines, and `(a, b)` shrunk by 2% at each end.
    pub fn window(&self, horizon: f64) -> (f64, f64) {
        match *self {
            Self::Segment { a, b } => (a, b),
            Self::Ray => (0.0, horizon),
            Self::Line => (-horizon, horizon),
            Self::Open { a, b } => {
                let m = 0.02 * (b - a);
                (a + m, b - m)
            }
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match *self {
            Self::Segment { a, b } | Self::Open { a, b } => (a, b),
            Self::Ray => (0.0, f64::INFINITY),
            Self::Line => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parametrization {
    ArcLength,
    Affine,
}

pub type PointFn = Arc<dyn Fn(f64) -> ComplexPoint + Send + Sync>;

/// A parametrised curve in a model domain, claimed to be a geodesic by its
/// constructor.
#[derive(Clone)]
pub struct GeodesicCurve {
    pub domain: ModelDomain,
    pub interval: Interval,
    pub parametrization: Parametrization,
    pub label: String,
    sampler: PointFn,
    derivative: Option<PointFn>,
}

impl fmt::Debug for GeodesicCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeodesicCurve")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("interval", &self.interval)
            .field("parametrization", &self.parametrization)
            .finish()
    }
}

impl GeodesicCurve {
    pub fn new(
        domain: ModelDomain,
        interval: Interval,
        parametrization: Parametrization,
        label: impl Into<String>,
        sampler: impl Fn(f64) -> ComplexPoint + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            interval,
            parametrization,
            label: label.into(),
            sampler: Arc::new(sampler),
            derivative: None,
        }
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> ComplexPoint + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn sample(&self, t: f64) -> ComplexPoint {
        (self.sampler)(t)
    }

    pub fn derivative(&self, t: f64) -> ComplexPoint {
        match &self.derivative {
            Some(d) => d(t),
            None => Curve::velocity(&FdOnly(self), t),
        }
    }

    pub fn is_arc_length(&self) -> bool {
        self.parametrization == Parametrization::ArcLength
    }

    /// `s -> gamma(alpha s + beta)`; affine unless `|alpha| = 1` on an
    /// arc-length curve.
    pub fn reparametrize(&self, alpha: f64, beta: f64) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Degenerate("affine reparametrisation needs alpha != 0".into()));
        }
        let inv = |t: f64| (t - beta) / alpha;
        let ordered = |a: f64, b: f64| if a <= b { (a, b) } else { (b, a) };
        let interval = match self.interval {
            Interval::Segment { a, b } => {
                let (a, b) = ordered(inv(a), inv(b));
                Interval::Segment { a, b }
            }
            Interval::Open { a, b } => {
                let (a, b) = ordered(inv(a), inv(b));
                Interval::Open { a, b }
            }
            Interval::Ray if alpha > 0.0 && beta == 0.0 => Interval::Ray,
            Interval::Ray => {
                let s0 = inv(0.0);
                if alpha > 0.0 {
                    Interval::Open { a: s0, b: f64::INFINITY }
                } else {
                    Interval::Open { a: f64::NEG_INFINITY, b: s0 }
                }
            }
            Interval::Line => Interval::Line,
        };
        let parametrization = if self.is_arc_length() && alpha.abs() == 1.0 {
            Parametrization::ArcLength
        } else {
            Parametrization::Affine
        };
        let inner = self.sampler.clone();
        let mut out = Self::new(
            self.domain.clone(),
            interval,
            parametrization,
            format!("{} (t = {alpha} s + {beta})", self.label),
            move |s| inner(alpha * s + beta),
        );
        if let Some(d) = self.derivative.clone() {
            out = out.with_derivative(move |s| d(alpha * s + beta).scale_re(alpha));
        }
        Ok(out)
    }

    /// CSV table `t,re_z1,im_z1,...` at the given parameters.
    pub fn to_csv(&self, ts: &[f64]) -> String {
        let n = self.domain.dim();
        let mut s = String::from("t");
        for j in 1..=n {
            let _ = write!(s, ",re_z{j},im_z{j}");
        }
        s.push('\n');
        for &t in ts {
            let p = self.sample(t);
            let _ = write!(s, "{t:.16e}");
            for c in p.coords() {
                let _ = write!(s, ",{:.16e},{:.16e}", c.re, c.im);
            }
            s.push('\n');
        }
        s
    }
}

struct FdOnly<'a>(&'a GeodesicCurve);

impl Curve for FdOnly<'_> {
    fn point(&self, t: f64) -> ComplexPoint {
        self.0.sample(t)
    }
}

impl Curve for GeodesicCurve {
    fn point(&self, t: f64) -> ComplexPoint {
        self.sample(t)
    }

    fn velocity(&self, t: f64) -> ComplexPoint {
        self.derivative(t)
    }
}

/// Signed hyperbolic length of `curve` between parameters `a` and `b`.
fn signed_length(curve: &GeodesicCurve, a: f64, b: f64) -> Result<f64> {
    if a <= b {
        hyperbolic_length(&curve.domain, curve, a, b)
    } else {
        Ok(-hyperbolic_length(&curve.domain, curve, b, a)?)
    }
}

/// Tolerance on the parameter in arc-length inversion.
pub const ARC_LENGTH_TOL: f64 = 1e-10;

/// Parameter `t` with signed length `s` from `anchor`, by safeguarded
/// Newton iteration on the cumulative length.
fn invert_length(curve: &GeodesicCurve, anchor: f64, s: f64) -> Result<f64> {
    let (mut lo, mut hi) = curve.interval.bounds();
    let mut t = anchor;
    let mut len = 0.0;
    for _ in 0..200 {
        let r = s - len;
        if r > 0.0 {
            lo = lo.max(t);
        } else if r < 0.0 {
            hi = hi.min(t);
        } else {
            return Ok(t);
        }
        let k = metric::infinitesimal_metric(&curve.domain, &curve.sample(t), &curve.derivative(t))?;
        let mut next = if k > 0.0 { t + r / k } else { f64::NAN };
        if !(next > lo && next < hi) {
            next = match (lo.is_finite(), hi.is_finite()) {
                (true, true) => 0.5 * (lo + hi),
                (true, false) => t + 2.0 * (t - lo).abs().max(1.0),
                (false, true) => t - 2.0 * (hi - t).abs().max(1.0),
                (false, false) => t + r.signum(),
            };
        }
        len += signed_length(curve, t, next)?;
        let step = (next - t).abs();
        t = next;
        if step < ARC_LENGTH_TOL * (1.0 + t.abs()) {
            return Ok(t);
        }
    }
    Err(Error::Degenerate(format!("arc-length inversion did not converge for s = {s}")))
}

/// Reparametrises `curve` by hyperbolic arc length measured from the
/// parameter `anchor` (new parameter 0). Lines and open intervals are
/// assumed to have infinite length in both directions.
pub fn to_arc_length(curve: &GeodesicCurve, anchor: f64) -> Result<GeodesicCurve> {
    if !curve.interval.contains(anchor) {
        return Err(Error::Degenerate(format!("anchor {anchor} outside the parameter interval")));
    }
    let interval = match curve.interval {
        Interval::Segment { a, b } => Interval::Segment {
            a: signed_length(curve, anchor, a)?,
            b: signed_length(curve, anchor, b)?,
        },
        Interval::Ray if anchor == 0.0 => Interval::Ray,
        Interval::Ray => {
            let a = signed_length(curve, anchor, 0.0)?;
            Interval::Open { a, b: f64::INFINITY }
        }
        Interval::Line | Interval::Open { .. } => Interval::Line,
    };
    let inner = curve.clone();
    Ok(GeodesicCurve::new(
        curve.domain.clone(),
        interval,
        Parametrization::ArcLength,
        format!("{} (arc length)", curve.label),
        move |s| match invert_length(&inner, anchor, s) {
            Ok(t) => inner.sample(t),
            Err(_) => nan_point(inner.domain.dim()),
        },
    ))
}

pub(crate) fn nan_point(n: usize) -> ComplexPoint {
    ComplexPoint(vec![num_complex::Complex64::new(f64::NAN, f64::NAN); n])
}

/// Cauchy diagnostic for the end point of a ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Landing {
    pub point: BoundaryPoint,
    /// `|gamma(h) - gamma(h / 2)|`
    pub residual: f64,
    /// `residual <= LANDING_RESIDUAL_TOL`
    pub converged: bool,
}

pub const LANDING_RESIDUAL_TOL: f64 = 1e-4;
pub const DEFAULT_HORIZON: f64 = 20.0;

/// Nearest-boundary projection used by [`landing_point`].
fn project_to_boundary(domain: &ModelDomain, z: &ComplexPoint) -> Result<ComplexPoint> {
    let radial = |z: &ComplexPoint| -> Result<ComplexPoint> {
        let r = z.norm();
        if r == 0.0 {
            return Err(Error::Degenerate("cannot project the origin radially".into()));
        }
        Ok(z.scale_re(1.0 / r))
    };
    match domain {
        ModelDomain::UnitDisc | ModelDomain::UnitBall { .. } => radial(z),
        ModelDomain::PuncturedDisc => {
            let r = z[0].norm();
            if r < 1.0 - r {
                Ok(ComplexPoint::zeros(1))
            } else {
                radial(z)
            }
        }
        ModelDomain::Annulus { r } => {
            let m = z[0].norm();
            let target = if (m - 1.0 / r).abs() < (r - m).abs() { 1.0 / r } else { *r };
            Ok(z.scale_re(target / m))
        }
        ModelDomain::Polydisc { .. } => {
            let (j, m) = z
                .coords()
                .iter()
                .map(|c| c.norm())
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("dimension >= 1");
            let mut p = z.clone();
            p.0[j] /= m;
            Ok(p)
        }
        ModelDomain::ReinhardtLog { base } => {
            let x = log_coordinates(z)?;
            let c: Vec<f64> = domain.reference_point().coords().iter().map(|v| v.re.ln()).collect();
            let dir: Vec<f64> = x.iter().zip(&c).map(|(a, b)| a - b).collect();
            let s = base.ray_exit(&c, &dir);
            Ok(ComplexPoint(
                z.coords()
                    .iter()
                    .zip(x.iter().zip(&dir))
                    .zip(&c)
                    .map(|((v, (xi, di)), ci)| v * (ci + s * di - xi).exp())
                    .collect(),
            ))
        }
        ModelDomain::ScaledEllipsoid { eps, t, .. } => {
            let xi = radial(z)?;
            Ok(xi.scale_re(scaling::exit_radius(*eps, *t, &xi)))
        }
        other => Err(Error::Unsupported(format!("{} is unbounded", other.name()))),
    }
}

/// Boundary point approached by a ray (or the forward end of a line).
pub fn landing_point(curve: &GeodesicCurve, horizon: f64) -> Result<Landing> {
    if !curve.domain.is_bounded() {
        return Err(Error::Unsupported(format!(
            "landing points are only defined on bounded kinds, not {}",
            curve.domain.name()
        )));
    }
    if !(horizon > 0.0) {
        return Err(Error::Degenerate("horizon must be positive".into()));
    }
    let (far, half) = match curve.interval {
        Interval::Ray | Interval::Line => (horizon, 0.5 * horizon),
        Interval::Open { a, b } if b.is_finite() => {
            // affine lines: approach the right end geometrically
            let w = b - a;
            (b - w * (-horizon).exp(), b - w * (-0.5 * horizon).exp())
        }
        _ => return Err(Error::Degenerate("landing needs a ray or a line".into())),
    };
    let z = curve.sample(far);
    let residual = z.dist(&curve.sample(half));
    let point = project_to_boundary(&curve.domain, &z)?;
    Ok(Landing {
        point: BoundaryPoint {
            domain: curve.domain.clone(),
            point,
        },
        residual,
        converged: residual <= LANDING_RESIDUAL_TOL,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShadowingReport {
    /// max over the grid of `K(gamma(t), eta(t))`
    pub bound: f64,
    /// largest parameter actually used (points closer than `1e-8` to the
    /// boundary are not evaluated)
    pub effective_horizon: f64,
    pub tail_non_increasing: bool,
    pub samples: Vec<(f64, f64)>,
}

/// Empirical constant `C` with `K(gamma(t), eta(t)) <= C` for two rays
/// landing at the same boundary point.
pub fn shadowing_bound(
    domain: &ModelDomain,
    gamma: &GeodesicCurve,
    eta: &GeodesicCurve,
    horizon: f64,
) -> Result<ShadowingReport> {
    let la = landing_point(gamma, DEFAULT_HORIZON.max(horizon))?;
    let lb = landing_point(eta, DEFAULT_HORIZON.max(horizon))?;
    if la.point.point.dist(&lb.point.point) > LANDING_RESIDUAL_TOL {
        return Err(Error::Degenerate(format!(
            "rays land at distinct points {} and {}",
            la.point.point, lb.point.point
        )));
    }
    let opts = MetricOptions::permissive();
    let steps = 100;
    let mut samples = Vec::new();
    for k in 0..=steps {
        let t = horizon * k as f64 / steps as f64;
        let (p, q) = (gamma.sample(t), eta.sample(t));
        if domain.boundary_distance(&p)? < 1e-8 || domain.boundary_distance(&q)? < 1e-8 {
            break;
        }
        samples.push((t, metric::distance_with(domain, &p, &q, &opts)?.value));
    }
    let bound = samples.iter().map(|s| s.1).fold(0.0, f64::max);
    let tail = &samples[samples.len() / 2..];
    Ok(ShadowingReport {
        bound,
        effective_horizon: samples.last().map_or(0.0, |s| s.0),
        tail_non_increasing: tail.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-9),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn interval_windows() {
        assert_eq!(Interval::Ray.window(5.0), (0.0, 5.0));
        assert_eq!(Interval::Line.window(2.0), (-2.0, 2.0));
        let (a, b) = Interval::Open { a: -1.0, b: 1.0 }.window(1.0);
        assert!(a > -1.0 && b < 1.0);
        assert!(!Interval::Open { a: 0.0, b: 1.0 }.contains(1.0));
    }

    #[test]
    fn arc_length_conversion_of_affine_radial_line() {
        let g = punctured_disc_radial_geodesic(c(0.0, 1.0), Parametrization::Affine).unwrap();
        let a = to_arc_length(&g, 0.5).unwrap();
        assert_eq!(a.sample(0.0).dist(&g.sample(0.5)), 0.0);
        for (s, t) in [(0.0, 0.7), (-1.3, 0.4), (2.0, -0.5)] {
            let d = metric::distance(&g.domain, &a.sample(s), &a.sample(t)).unwrap().value;
            assert!((d - (t - s).abs()).abs() < 1e-6, "{d} vs {}", (t - s).abs());
        }
    }

    #[test]
    fn arc_length_of_midline_is_linear() {
        let g = strip_vertical_geodesic(std::f64::consts::E, 0.0).unwrap();
        let a = to_arc_length(&g, 0.0).unwrap();
        // density pi / (4 a) on the midline of a strip of half-width a = 1
        let s = 1.5;
        let expected = s * 4.0 / std::f64::consts::PI;
        assert!((a.sample(s)[0].im - expected).abs() < 1e-8);
    }

    #[test]
    fn disc_landing() {
        let r = disc_radial_ray(c(1.0, 0.0));
        let l = landing_point(&r, 20.0).unwrap();
        assert!(l.point.point.dist(&ComplexPoint::from_real(&[1.0])) < 1e-15);
        assert!(l.residual < 1e-8 && l.converged);
        let strip = strip_horizontal_geodesic(2.0, 0.0).unwrap();
        assert!(landing_point(&strip, 20.0).is_err());
    }

    #[test]
    fn ball_ray_lands_at_target() {
        let p = BoundaryPoint::new(
            ModelDomain::ball(2),
            ComplexPoint::new(vec![c(0.6, 0.0), c(0.0, 0.8)]),
        )
        .unwrap();
        let ray = ball_landing_ray(2, &ComplexPoint::from_real(&[0.1, -0.3]), &p).unwrap();
        let l = landing_point(&ray, 20.0).unwrap();
        assert!(l.point.point.dist(&p.point) < 1e-6 && l.converged);
    }

    #[test]
    fn annulus_line_lands_on_outer_circle() {
        let r = 4.0;
        let g = annulus_radial_geodesic(r, c(1.0, 0.0), Parametrization::ArcLength).unwrap();
        let l = landing_point(&g, 20.0).unwrap();
        assert!((l.point.point[0].norm() - r).abs() < 1e-12);
        assert!(l.point.point.dist(&ComplexPoint::from_real(&[r])) < 1e-6);
    }

    #[test]
    fn shadowing_examples() {
        let d = ModelDomain::UnitDisc;
        let one = BoundaryPoint::new(d.clone(), ComplexPoint::from_real(&[1.0])).unwrap();
        let g = ball_landing_ray(1, &ComplexPoint::zeros(1), &one).unwrap();
        let same = shadowing_bound(&ModelDomain::ball(1), &g, &g, 8.0).unwrap();
        assert_eq!(same.bound, 0.0);
        let e = ball_landing_ray(1, &ComplexPoint::scalar(c(0.0, 0.5)), &one).unwrap();
        let rep = shadowing_bound(&ModelDomain::ball(1), &g, &e, 8.0).unwrap();
        assert!(rep.bound.is_finite() && rep.bound > 0.0 && rep.tail_non_increasing);
        // oracle: at t = 0 the bound includes K(0, i/2)
        assert!(rep.bound >= 0.5f64.atanh() - 1e-12);
        let other = BoundaryPoint::new(d, ComplexPoint::from_real(&[-1.0])).unwrap();
        let f = ball_landing_ray(1, &ComplexPoint::zeros(1), &other).unwrap();
        assert!(shadowing_bound(&ModelDomain::ball(1), &g, &f, 8.0).is_err());
    }

    #[test]
    fn ball_shadowing_finite() {
        let e1 = BoundaryPoint::e1(2);
        let g = ball_landing_ray(2, &ComplexPoint::zeros(2), &e1).unwrap();
        let h = ball_landing_ray(2, &ComplexPoint::from_real(&[0.0, 0.5]), &e1).unwrap();
        let rep = shadowing_bound(&ModelDomain::ball(2), &g, &h, 8.0).unwrap();
        assert!(rep.bound.is_finite());
    }

    #[test]
    fn reparametrisation_keeps_points() {
        let g = disc_radial_ray(c(0.0, 1.0));
        let h = g.reparametrize(2.0, 0.5).unwrap();
        assert_eq!(h.parametrization, Parametrization::Affine);
        assert_eq!(h.sample(1.0), g.sample(2.5));
        assert!(h.derivative(1.0).dist(&g.derivative(2.5).scale_re(2.0)) < 1e-12);
    }

    #[test]
    fn csv_export() {
        let g = disc_radial_ray(c(1.0, 0.0));
        let csv = g.to_csv(&[0.0, 1.0]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,re_z1,im_z1");
        let back: f64 = lines[2].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 1f64.tanh());
    }
}
