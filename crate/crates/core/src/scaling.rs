//! The scaling method: the ball automorphisms `A_t` fixing `e_1`, the
//! rescaled domains `Omega_t = A_t^{-1}(Omega_0)` of the model ellipsoid, and
//! convergence probes for their metrics and geodesic rays.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domains::ellipsoid_defining_function;
use crate::error::{Error, Result};
use crate::geodesics::ball_landing_ray;
use crate::domains::BoundaryPoint;
use crate::metric::closed;
use crate::numerics::golden_min;
use crate::point::ComplexPoint;

/// Default perturbation size of the model ellipsoid.
pub const DEFAULT_EPS: f64 = 0.05;
/// Default band width for the compact-divergence probe.
pub const DEFAULT_BAND: f64 = 0.5;

/// `t` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ScalingParameter(f64);

impl ScalingParameter {
    pub fn new(t: f64) -> Result<Self> {
        if (0.0..1.0).contains(&t) {
            Ok(Self(t))
        } else {
            Err(Error::InvalidDomain(format!("scaling parameter {t} outside [0, 1)")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ScalingParameter {
    type Error = Error;
    fn try_from(t: f64) -> Result<Self> {
        Self::new(t)
    }
}

impl From<ScalingParameter> for f64 {
    fn from(t: ScalingParameter) -> f64 {
        t.0
    }
}

/// `z -> ((z_1 + s) / (1 + s z_1), sqrt(1 - s^2) z' / (1 + s z_1))` for `|s| < 1`.
fn mobius_shift(s: f64, z: &ComplexPoint) -> Result<ComplexPoint> {
    let z1 = z[0];
    let den = Complex64::new(1.0, 0.0) + z1 * s;
    if den.norm() == 0.0 {
        return Err(Error::Pole(z.to_string()));
    }
    let k = ((1.0 - s) * (1.0 + s)).sqrt();
    let mut out = Vec::with_capacity(z.dim());
    out.push((z1 + s) / den);
    out.extend(z.coords()[1..].iter().map(|c| c * k / den));
    Ok(ComplexPoint(out))
}

/// `A_t(z)`.
pub fn scaling_automorphism(t: f64, z: &ComplexPoint) -> Result<ComplexPoint> {
    let t = ScalingParameter::new(t)?;
    mobius_shift(t.get(), z)
}

/// `A_t^{-1}(z) = A_{-t}(z)`.
pub fn scaling_inverse(t: f64, z: &ComplexPoint) -> Result<ComplexPoint> {
    let t = ScalingParameter::new(t)?;
    mobius_shift(-t.get(), z)
}

/// `z in Omega_t`, i.e. `rho(A_t(z)) < 0`.
pub fn scaled_domain_membership(eps: f64, t: f64, z: &ComplexPoint) -> Result<bool> {
    let w = scaling_automorphism(t, z)?;
    Ok(ellipsoid_defining_function(eps, &w) < 0.0)
}

fn scaled_rho(eps: f64, t: f64, z: &ComplexPoint) -> f64 {
    match mobius_shift(t, z) {
        Ok(w) => ellipsoid_defining_function(eps, &w),
        Err(_) => f64::INFINITY,
    }
}

/// Direction on the unit sphere with `z_1 = cos(a) e^{i phi}`, `|z'| = sin(a)`.
/// `Omega_t` is invariant under unitary maps of `z'`, so these directions
/// exhaust the sphere up to symmetry.
fn sphere_direction(n: usize, a: f64, phi: f64) -> ComplexPoint {
    let mut p = ComplexPoint::zeros(n);
    if n == 1 {
        p.0[0] = Complex64::from_polar(1.0, phi);
    } else {
        p.0[0] = Complex64::from_polar(a.cos(), phi);
        p.0[1] = Complex64::new(a.sin(), 0.0);
    }
    p
}

/// First radius at which the ray `r xi` leaves `Omega_t` (at most 1, since
/// `Omega_t` lies in the unit ball).
pub(crate) fn exit_radius(eps: f64, t: f64, xi: &ComplexPoint) -> f64 {
    let f = |r: f64| scaled_rho(eps, t, &xi.scale_re(r));
    let steps = 400;
    let mut prev = 0.0;
    for k in 1..=steps {
        let r = k as f64 / steps as f64;
        if f(r) >= 0.0 {
            let (mut lo, mut hi) = (prev, r);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f(mid) >= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return lo;
        }
        prev = r;
    }
    1.0
}

/// Radius of the largest ball `B(0, r)` inside `Omega_t`.
///
/// Exactly 1 when `eps = 0`. Otherwise the first exit radius is minimised
/// over a grid of sphere directions and refined locally; the result is
/// shrunk by a relative `1e-9` so that the inscribed ball is strictly inside.
pub fn inscribed_radius(n: usize, eps: f64, t: f64) -> Result<f64> {
    ScalingParameter::new(t)?;
    if n == 0 || !(eps >= 0.0) {
        return Err(Error::InvalidDomain("need n >= 1 and eps >= 0".into()));
    }
    if eps == 0.0 {
        return Ok(1.0);
    }
    if scaled_rho(eps, t, &ComplexPoint::zeros(n)) >= 0.0 {
        return Err(Error::Degenerate(format!("origin outside Omega_t for eps={eps}, t={t}")));
    }
    let na = if n == 1 { 1 } else { 33 };
    let np = 65;
    let da = std::f64::consts::FRAC_PI_2 / (na.max(2) - 1) as f64;
    let dp = std::f64::consts::PI / (np - 1) as f64;
    let g = |a: f64, p: f64| exit_radius(eps, t, &sphere_direction(n, a, p));
    let mut best = (0.0, 0.0, f64::INFINITY);
    for i in 0..na {
        for j in 0..np {
            let (a, p) = (i as f64 * da, j as f64 * dp);
            let r = g(a, p);
            if r < best.2 {
                best = (a, p, r);
            }
        }
    }
    let (mut a, mut p, mut r) = best;
    for _ in 0..4 {
        if n > 1 {
            let (a1, r1) = golden_min(|x| g(x, p), (a - da).max(0.0), (a + da).min(std::f64::consts::FRAC_PI_2), 1e-10);
            if r1 < r {
                a = a1;
                r = r1;
            }
        }
        let (p1, r1) = golden_min(|x| g(a, x), p - dp, p + dp, 1e-10);
        if r1 < r {
            p = p1;
            r = r1;
        }
    }
    Ok(r * (1.0 - 1e-9))
}

/// Radius of the smallest ball centred at 0 containing `Omega_t`: the unit
/// ball, since `rho >= |z|^2 - 1` and `A_t` preserves the ball.
pub fn circumscribed_radius(_n: usize, _eps: f64, _t: f64) -> f64 {
    1.0
}

/// Sup of `|r(xi) - 1|` over sampled boundary points `r(xi) xi` of
/// `Omega_t` with `Re z_1 > beta`: distance of the boundary piece from the
/// unit sphere, sampled as a radial graph.
pub fn boundary_graph_deviation(n: usize, eps: f64, t: f64, beta: f64) -> Result<f64> {
    ScalingParameter::new(t)?;
    if eps == 0.0 {
        return Ok(0.0);
    }
    let na = if n == 1 { 1 } else { 17 };
    let np = 65;
    let mut worst: f64 = 0.0;
    for i in 0..na {
        for j in 0..np {
            let a = i as f64 * std::f64::consts::FRAC_PI_2 / (na.max(2) - 1) as f64;
            let p = j as f64 * std::f64::consts::PI / (np - 1) as f64;
            let xi = sphere_direction(n, a, p);
            let r = exit_radius(eps, t, &xi);
            if (xi[0] * r).re > beta {
                worst = worst.max((1.0 - r).abs());
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub t: f64,
    pub key: String,
    pub deviation: f64,
    pub gap: f64,
}

/// Rows `(t, key, deviation, gap)` keyed by `t`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSummary {
    pub max_deviation: f64,
    pub monotone: bool,
}

/// Deviations below this floor are treated as rounding noise by the
/// monotonicity check.
pub const NOISE_FLOOR: f64 = 1e-12;

impl ConvergenceTable {
    /// `(t, max deviation at t)` in order of first appearance.
    pub fn per_t(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for row in &self.rows {
            match out.iter_mut().find(|(t, _)| *t == row.t) {
                Some(e) => e.1 = e.1.max(row.deviation),
                None => out.push((row.t, row.deviation)),
            }
        }
        out
    }

    /// Per-`t` maxima are non-increasing (up to [`NOISE_FLOOR`]).
    pub fn is_monotone(&self) -> bool {
        self.per_t()
            .windows(2)
            .all(|w| w[1].1 <= w[0].1 + NOISE_FLOOR)
    }

    pub fn max_deviation(&self) -> f64 {
        self.rows.iter().map(|r| r.deviation).fold(0.0, f64::max)
    }

    pub fn summary(&self) -> ConvergenceSummary {
        ConvergenceSummary {
            max_deviation: self.max_deviation(),
            monotone: self.is_monotone(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,key,deviation,gap\n");
        for r in &self.rows {
            let _ = writeln!(s, "{:.16e},{},{:.16e},{:.16e}", r.t, r.key, r.deviation, r.gap);
        }
        s
    }
}

fn check_increasing(ts: &[f64]) -> Result<()> {
    for t in ts {
        ScalingParameter::new(*t)?;
    }
    if ts.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Degenerate("scaling parameters must increase".into()));
    }
    Ok(())
}

/// Pairs of distinct points of a Halton sample of the ball `B(0, radius)`
/// in `C^n`.
pub fn default_grid(n: usize, radius: f64, count: usize) -> Vec<(ComplexPoint, ComplexPoint)> {
    let mut pts = vec![ComplexPoint::zeros(n)];
    let mut i = 0u64;
    while pts.len() < count {
        let h = crate::numerics::halton(i, 2 * n);
        i += 1;
        let p = ComplexPoint(
            (0..n)
                .map(|j| Complex64::new(2.0 * h[2 * j] - 1.0, 2.0 * h[2 * j + 1] - 1.0) * radius)
                .collect(),
        );
        if p.norm() <= radius {
            pts.push(p);
        }
    }
    let mut pairs = Vec::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            pairs.push((pts[a].clone(), pts[b].clone()));
        }
    }
    pairs
}

/// For each `t`, brackets `K_{Omega_t}` between `K_B` (outer ball) and
/// `K_{B(0, r_in(t))}` (inscribed ball) on every grid pair and records the
/// certified deviation from `K_B`, the width of that bracket.
pub fn metric_convergence_probe(
    n: usize,
    eps: f64,
    ts: &[f64],
    grid: &[(ComplexPoint, ComplexPoint)],
) -> Result<ConvergenceTable> {
    check_increasing(ts)?;
    let r0 = grid
        .iter()
        .flat_map(|(a, b)| [a.norm(), b.norm()])
        .fold(0.0, f64::max);
    if r0 >= 1.0 {
        return Err(Error::Degenerate("grid must lie in a ball of radius < 1".into()));
    }
    let mut table = ConvergenceTable::default();
    for &t in ts {
        let r_in = inscribed_radius(n, eps, t)?;
        if r0 >= r_in {
            return Err(Error::NotInterior {
                domain: format!("B(0, {r_in}) inside Omega_{t}"),
                point: format!("grid point of norm {r0}"),
            });
        }
        for (k, (z, w)) in grid.iter().enumerate() {
            z.check_dim(n)?;
            w.check_dim(n)?;
            let lower = closed::ball(z, w);
            let upper = if r_in == 1.0 { lower } else { closed::ball_radius(z, w, r_in) };
            table.rows.push(ConvergenceRow {
                t,
                key: format!("pair{k}"),
                deviation: upper - lower,
                gap: upper - lower,
            });
        }
    }
    Ok(table)
}

/// Rescaled landing rays: for each `t`, the ray from `A_t(w0)` landing at
/// `e_1`, pulled back by `A_t^{-1}`, against the fixed ray from `w0`.
///
/// `deviation` is the sup Euclidean distance on `window` (101 samples);
/// `gap` is the largest positive part of the rescaled defining function of
/// `Omega_t` along the fixed ray (0 when the ray stays in `Omega_t`).
pub fn geodesic_persistence_probe(
    eps: f64,
    ts: &[f64],
    w0: &ComplexPoint,
    window: (f64, f64),
) -> Result<ConvergenceTable> {
    check_increasing(ts)?;
    let n = w0.dim();
    let e1 = BoundaryPoint::e1(n);
    let fixed = ball_landing_ray(n, w0, &e1)?;
    let samples = 100;
    let us: Vec<f64> = (0..=samples)
        .map(|k| window.0 + (window.1 - window.0) * k as f64 / samples as f64)
        .collect();
    let mut table = ConvergenceTable::default();
    for &t in ts {
        let zt = scaling_automorphism(t, w0)?;
        let ray = ball_landing_ray(n, &zt, &e1)?;
        let mut dev: f64 = 0.0;
        let mut gap: f64 = 0.0;
        for &u in &us {
            let back = scaling_inverse(t, &ray.sample(u))?;
            let eta = fixed.sample(u);
            dev = dev.max(back.dist(&eta));
            if eps > 0.0 {
                gap = gap.max(scaled_rho(eps, t, &eta).max(0.0));
            }
        }
        table.rows.push(ConvergenceRow {
            t,
            key: "window".into(),
            deviation: dev,
            gap,
        });
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceRow {
    pub t: f64,
    pub re_pi1: f64,
    pub norm: f64,
    pub band_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub band: f64,
    pub rows: Vec<DivergenceRow>,
    pub divergent: bool,
}

/// Tracks `A_{t_k}^{-1}(seed_k)`: its first-coordinate real part against the
/// band `0 < Re pi_1 < 1 - band`, and whether the norms approach 1 (the
/// smallest norm over the last third of the sequence exceeds `1 - tol`).
pub fn compactly_divergent_probe(
    ts: &[f64],
    seeds: &[ComplexPoint],
    band: f64,
    tol: f64,
) -> Result<DivergenceReport> {
    if ts.len() != seeds.len() || ts.is_empty() {
        return Err(Error::Degenerate("need one seed per scaling parameter".into()));
    }
    let mut rows = Vec::with_capacity(ts.len());
    for (&t, seed) in ts.iter().zip(seeds) {
        let p = scaling_inverse(t, seed)?;
        let re = p[0].re;
        rows.push(DivergenceRow {
            t,
            re_pi1: re,
            norm: p.norm(),
            band_ok: re > 0.0 && re < 1.0 - band,
        });
    }
    let tail = &rows[rows.len() - rows.len().div_ceil(3)..];
    let divergent = tail.iter().map(|r| r.norm).fold(f64::INFINITY, f64::min) > 1.0 - tol;
    Ok(DivergenceReport { band, rows, divergent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn automorphism_examples() {
        let t = 0.6;
        let a0 = scaling_automorphism(t, &ComplexPoint::zeros(3)).unwrap();
        assert_eq!(a0, ComplexPoint::from_real(&[t, 0.0, 0.0]));
        let e1 = ComplexPoint::e1(2);
        assert_eq!(scaling_automorphism(t, &e1).unwrap(), e1);
        let m = e1.scale_re(-1.0);
        assert!(scaling_automorphism(t, &m).unwrap().dist(&m) < 1e-15);
        assert!(scaling_automorphism(1.0, &e1).is_err());
    }

    #[test]
    fn inverse_examples() {
        let t = 0.3;
        let p = ComplexPoint::from_real(&[t, 0.0]);
        assert!(scaling_inverse(t, &p).unwrap().norm() < 1e-16);
        let e1 = ComplexPoint::e1(2);
        assert_eq!(scaling_inverse(t, &e1).unwrap(), e1);
        let z = ComplexPoint::new(vec![c(0.2, -0.3), c(0.5, 0.4)]);
        let back = scaling_automorphism(t, &scaling_inverse(t, &z).unwrap()).unwrap();
        assert!(back.dist(&z) < 1e-12);
    }

    #[test]
    fn first_axis_is_mobius_addition() {
        for (s, t) in [(0.2, 0.5), (-0.7, 0.9), (0.0, 0.3)] {
            let got = scaling_automorphism(t, &ComplexPoint::from_real(&[s, 0.0])).unwrap();
            let expect = (s + t) / (1.0 + t * s);
            assert!((got[0].re - expect).abs() < 1e-15 && got[1].norm() == 0.0);
        }
    }

    #[test]
    fn membership_examples() {
        let z = ComplexPoint::from_real(&[0.5, 0.5]);
        assert_eq!(
            scaled_domain_membership(0.0, 0.7, &z).unwrap(),
            z.norm_sqr() < 1.0
        );
        assert!(!scaled_domain_membership(0.1, 0.4, &ComplexPoint::e1(2)).unwrap());
        assert!(scaled_domain_membership(0.1, 0.9, &ComplexPoint::zeros(2)).unwrap());
        let v = ellipsoid_defining_function(0.1, &ComplexPoint::from_real(&[0.9, 0.0]));
        assert!((v - (-1.0 + 0.81 + 0.1 * 1e-4)).abs() < 1e-15);
    }

    #[test]
    fn inscribed_radius_behaviour() {
        assert_eq!(inscribed_radius(2, 0.0, 0.5).unwrap(), 1.0);
        let rs: Vec<f64> = [0.5, 0.9, 0.99]
            .iter()
            .map(|&t| inscribed_radius(2, 0.05, t).unwrap())
            .collect();
        assert!(rs[0] < rs[1] && rs[1] < rs[2] && rs[2] < 1.0, "{rs:?}");
        // the inscribed ball really is inside: spot-check its sphere
        let r = rs[1];
        for k in 0..200 {
            let h = crate::numerics::halton(k, 2);
            let xi = sphere_direction(2, h[0] * std::f64::consts::FRAC_PI_2, h[1] * std::f64::consts::TAU);
            assert!(scaled_rho(0.05, 0.9, &xi.scale_re(r)) < 0.0);
        }
    }

    #[test]
    fn boundary_deviation_shrinks() {
        let a = boundary_graph_deviation(2, 0.05, 0.5, -0.5).unwrap();
        let b = boundary_graph_deviation(2, 0.05, 0.99, -0.5).unwrap();
        assert!(b < a);
        assert_eq!(boundary_graph_deviation(2, 0.0, 0.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn metric_probe_examples() {
        let grid = default_grid(2, 0.5, 6);
        let exact = metric_convergence_probe(2, 0.0, &[0.5, 0.9], &grid).unwrap();
        assert_eq!(exact.max_deviation(), 0.0);
        let same = vec![(ComplexPoint::zeros(2), ComplexPoint::zeros(2))];
        let t = metric_convergence_probe(2, 0.05, &[0.5, 0.9], &same).unwrap();
        assert_eq!(t.max_deviation(), 0.0);
        assert!(metric_convergence_probe(2, 0.05, &[0.9, 0.5], &grid).is_err());
    }

    #[test]
    fn persistence_radial_axis_is_exact() {
        let t = geodesic_persistence_probe(0.0, &[0.5, 0.9], &ComplexPoint::zeros(1), (0.0, 5.0)).unwrap();
        assert!(t.max_deviation() < 1e-14);
    }

    #[test]
    fn divergence_examples() {
        let ts = [0.5, 0.9, 0.99];
        let e1 = vec![ComplexPoint::e1(2); 3];
        let r = compactly_divergent_probe(&ts, &e1, 0.5, 1e-2).unwrap();
        assert!(r.rows.iter().all(|row| row.re_pi1 == 1.0 && !row.band_ok));
        let x0 = ComplexPoint::new(vec![c(0.2, 0.1), c(0.3, 0.0)]);
        let seeds: Vec<_> = ts.iter().map(|&t| scaling_automorphism(t, &x0).unwrap()).collect();
        let r = compactly_divergent_probe(&ts, &seeds, 0.5, 1e-2).unwrap();
        assert!(r.rows.iter().all(|row| (row.re_pi1 - 0.2).abs() < 1e-12));
        assert!(!r.divergent);
    }
}
