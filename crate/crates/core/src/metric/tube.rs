//! Two-sided bounds for the Kobayashi distance of a tube `T_B = B + i R^n`
//! over a bounded convex base.
//!
//! Lower bounds come from the holomorphic projections `z -> <d, z>` onto
//! strips (any holomorphic map contracts the distance); upper bounds come from
//! explicit analytic discs inside the tube.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::closed;
use crate::base::ConvexBase;
use crate::error::{Error, Result};
use crate::numerics::{golden_min, scan_min};
use crate::point::{dot, norm, ComplexPoint};

/// Directions sampled per dimension by [`caratheodory_lower`].
pub const DIRECTIONS_PER_DIM: usize = 64;

fn directions(base: &ConvexBase, extra: &[Vec<f64>], per_dim: usize) -> Vec<Vec<f64>> {
    let n = base.dim();
    let mut out: Vec<Vec<f64>> = Vec::new();
    match n {
        1 => out.push(vec![1.0]),
        2 => {
            let m = per_dim * 2;
            for k in 0..m {
                let t = PI * k as f64 / m as f64;
                out.push(vec![t.cos(), t.sin()]);
            }
        }
        _ => {
            // Fibonacci points on the sphere; d and -d give the same slab.
            let m = per_dim * n;
            let golden = PI * (3.0 - 5f64.sqrt());
            for k in 0..m {
                let y = 1.0 - (k as f64 + 0.5) / m as f64;
                let r = (1.0 - y * y).sqrt();
                let phi = golden * k as f64;
                let mut d = vec![0.0; n];
                d[0] = r * phi.cos();
                d[1] = r * phi.sin();
                d[2] = y;
                out.push(d);
            }
            for j in 0..n {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                out.push(e);
            }
        }
    }
    out.extend(base.facet_normals());
    for d in extra {
        let l = norm(d);
        if l > 1e-14 {
            out.push(d.iter().map(|v| v / l).collect());
        }
    }
    out
}

fn slab(base: &ConvexBase, d: &[f64]) -> (f64, f64) {
    let neg: Vec<f64> = d.iter().map(|v| -v).collect();
    (-base.support(&neg), base.support(d))
}

fn project(d: &[f64], z: &ComplexPoint) -> Complex64 {
    z.coords().iter().zip(d).map(|(c, w)| c * w).sum()
}

fn slab_distance(base: &ConvexBase, d: &[f64], u: &ComplexPoint, v: &ComplexPoint) -> f64 {
    let (lo, hi) = slab(base, d);
    closed::strip(lo, hi, project(d, u), project(d, v))
}

fn check_inputs(base: &ConvexBase, u: &ComplexPoint, v: &ComplexPoint) -> Result<()> {
    u.check_dim(base.dim())?;
    v.check_dim(base.dim())?;
    let (lo, hi) = base.bounding_box();
    if lo.iter().zip(&hi).any(|(l, h)| !(h > l)) {
        return Err(Error::Degenerate("base has empty interior".into()));
    }
    for p in [u, v] {
        if !base.contains(&p.re()) {
            return Err(Error::NotInterior {
                domain: "tube".into(),
                point: p.to_string(),
            });
        }
    }
    Ok(())
}

/// Lower bound: the largest strip distance among the projections
/// `z -> <d, z>` over a sample of real directions `d`.
pub fn caratheodory_lower(base: &ConvexBase, u: &ComplexPoint, v: &ComplexPoint) -> Result<f64> {
    caratheodory_lower_with(base, u, v, DIRECTIONS_PER_DIM)
}

pub fn caratheodory_lower_with(
    base: &ConvexBase,
    u: &ComplexPoint,
    v: &ComplexPoint,
    per_dim: usize,
) -> Result<f64> {
    check_inputs(base, u, v)?;
    if u == v {
        return Ok(0.0);
    }
    let e = v - u;
    let extra = [e.re(), e.im()];
    let dirs = directions(base, &extra, per_dim);
    let mut best = dirs
        .iter()
        .map(|d| slab_distance(base, d, u, v))
        .fold(0.0, f64::max);
    if base.dim() == 2 {
        // refine the angle around the best sampled direction
        let f = |t: f64| -slab_distance(base, &[t.cos(), t.sin()], u, v);
        let (t0, _) = scan_min(f, 0.0, PI, 2 * per_dim, 1e-10);
        best = best.max(-f(t0));
    }
    Ok(best)
}

/// Upper bound: the smallest disc distance over a family of analytic discs
/// through `u` and `v` (product discs for box bases, the exact strip slice
/// when `v - u` is a complex multiple of a real vector, otherwise inscribed
/// affine discs in the complex line through `u` and `v`).
pub fn lempert_upper(base: &ConvexBase, u: &ComplexPoint, v: &ComplexPoint) -> Result<f64> {
    check_inputs(base, u, v)?;
    if u == v {
        return Ok(0.0);
    }
    let mut best = f64::INFINITY;
    if let ConvexBase::Box { lo, hi } = base {
        let prod = (0..base.dim())
            .map(|j| closed::strip(lo[j], hi[j], u[j], v[j]))
            .fold(0.0, f64::max);
        best = best.min(prod);
    }
    let e = v - u;
    let a = e.re();
    let b = e.im();
    let x0 = u.re();
    if let Some((r, omega)) = real_direction(&a, &b) {
        // the complex line u + mu r meets the tube in a strip over the chord
        let (s_lo, s_hi) = base.chord(&x0, &r);
        let d = closed::strip(s_lo, s_hi, Complex64::new(0.0, 0.0), omega);
        best = best.min(d);
    } else {
        best = best.min(affine_disc_bound(base, &x0, &a, &b));
    }
    if !best.is_finite() {
        best = chained_bound(base, u, &e);
    }
    if !best.is_finite() {
        return Err(Error::NoAdmissibleDisc(format!("between {u} and {v}")));
    }
    Ok(best)
}

/// Triangle inequality along `u + s e`, `s in [0, 1]`, cut into `k` equal
/// pieces each bounded by an affine disc; the first `k = 2, 4, ..., 256`
/// for which every piece admits a disc.
fn chained_bound(base: &ConvexBase, u: &ComplexPoint, e: &ComplexPoint) -> f64 {
    let mut k = 2;
    while k <= 256 {
        let piece = e.scale_re(1.0 / k as f64);
        let (a, b) = (piece.re(), piece.im());
        let mut total = 0.0;
        for i in 0..k {
            let start = u + &e.scale_re(i as f64 / k as f64);
            total += affine_disc_bound(base, &start.re(), &a, &b);
            if !total.is_finite() {
                break;
            }
        }
        if total.is_finite() {
            return total;
        }
        k *= 2;
    }
    f64::INFINITY
}

/// If `a + i b` equals `omega * r` for a real unit vector `r`, returns `(r, omega)`.
fn real_direction(a: &[f64], b: &[f64]) -> Option<(Vec<f64>, Complex64)> {
    let aa = dot(a, a);
    let bb = dot(b, b);
    let ab = dot(a, b);
    if aa * bb - ab * ab > 1e-24 * (aa.max(bb)).powi(2).max(f64::MIN_POSITIVE) {
        return None;
    }
    let base = if aa >= bb { a } else { b };
    let l = norm(base);
    if l == 0.0 {
        return None;
    }
    let r: Vec<f64> = base.iter().map(|x| x / l).collect();
    let omega = Complex64::new(dot(a, &r), dot(b, &r));
    Some((r, omega))
}

/// Discs `zeta -> u + (m + rho lambda) e` inscribed in the slice of the tube
/// by the complex line `u + C e`; the points are `zeta = 0` and `zeta = 1`.
fn affine_disc_bound(base: &ConvexBase, x0: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let nb: Vec<f64> = b.iter().map(|x| -x).collect();
    let radius = |m: Complex64| -> f64 {
        let p: Vec<f64> = x0
            .iter()
            .zip(a.iter().zip(b))
            .map(|(x, (ai, bi))| x + m.re * ai - m.im * bi)
            .collect();
        if !base.contains(&p) {
            return 0.0;
        }
        base.ellipse_fit(&p, a, &nb)
    };
    let cost = |m: Complex64| -> f64 {
        let rho = radius(m);
        if rho <= 0.0 {
            return f64::INFINITY;
        }
        let p = -m / rho;
        let q = (Complex64::new(1.0, 0.0) - m) / rho;
        if p.norm() >= 1.0 || q.norm() >= 1.0 {
            return f64::INFINITY;
        }
        closed::disc(p, q)
    };
    let (c_lo, c_hi) = base.chord(x0, a);
    let lo = c_lo.max(-4.0);
    let hi = c_hi.min(5.0);
    let (mr, v1) = scan_min(|t| cost(Complex64::new(t, 0.0)), lo, hi, 64, 1e-9);
    if !v1.is_finite() {
        return f64::INFINITY;
    }
    let (_, v2) = golden_min(|s| cost(Complex64::new(mr, s)), -1.0, 1.0, 1e-9);
    v1.min(v2)
}

/// Two-sided bounds on the infinitesimal metric of the tube at `z` in
/// direction `v`.
pub fn infinitesimal_bounds(base: &ConvexBase, z: &ComplexPoint, v: &ComplexPoint) -> Result<(f64, f64)> {
    z.check_dim(base.dim())?;
    v.check_dim(base.dim())?;
    let x = z.re();
    if !base.contains(&x) {
        return Err(Error::NotInterior {
            domain: "tube".into(),
            point: z.to_string(),
        });
    }
    if v.norm() == 0.0 {
        return Ok((0.0, 0.0));
    }
    let a = v.re();
    let b = v.im();
    let dirs = directions(base, &[a.clone(), b.clone()], DIRECTIONS_PER_DIM);
    let density = |d: &[f64]| {
        let (lo, hi) = slab(base, d);
        closed::strip_density(lo, hi, Complex64::new(dot(d, &x), 0.0), project(d, v))
    };
    let mut lower = dirs.iter().map(|d| density(d)).fold(0.0, f64::max);
    if base.dim() == 2 {
        let (t0, _) = scan_min(|t| -density(&[t.cos(), t.sin()]), 0.0, PI, 128, 1e-10);
        lower = lower.max(density(&[t0.cos(), t0.sin()]));
    }
    let mut upper = f64::INFINITY;
    if let ConvexBase::Box { lo, hi } = base {
        let prod = (0..base.dim())
            .map(|j| closed::strip_density(lo[j], hi[j], z[j], v[j]))
            .fold(0.0, f64::max);
        upper = upper.min(prod);
    }
    if let Some((r, omega)) = real_direction(&a, &b) {
        let (s_lo, s_hi) = base.chord(&x, &r);
        upper = upper.min(closed::strip_density(s_lo, s_hi, Complex64::new(0.0, 0.0), omega));
    } else {
        let nb: Vec<f64> = b.iter().map(|t| -t).collect();
        let rho = base.ellipse_fit(&x, &a, &nb);
        upper = upper.min(1.0 / rho);
    }
    Ok((lower.min(upper), upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(xs: &[f64]) -> ComplexPoint {
        ComplexPoint::from_real(xs)
    }

    #[test]
    fn identical_points() {
        let b = ConvexBase::unit_ball(2);
        let u = real(&[0.1, 0.2]);
        assert_eq!(caratheodory_lower(&b, &u, &u).unwrap(), 0.0);
        assert_eq!(lempert_upper(&b, &u, &u).unwrap(), 0.0);
    }

    #[test]
    fn box_tube_is_product_of_strips() {
        let b = ConvexBase::boxed(vec![-1.0, -0.5], vec![2.0, 0.5]).unwrap();
        let u = real(&[0.0, 0.1]);
        let v = real(&[1.5, -0.2]);
        let expect = closed::strip(-1.0, 2.0, u[0], v[0]).max(closed::strip(-0.5, 0.5, u[1], v[1]));
        let lo = caratheodory_lower(&b, &u, &v).unwrap();
        let hi = lempert_upper(&b, &u, &v).unwrap();
        assert!((lo - expect).abs() < 1e-12, "{lo} {expect}");
        assert!((hi - expect).abs() < 1e-6, "{hi} {expect}");
    }

    #[test]
    fn ball_tube_diameter_is_exact() {
        let b = ConvexBase::unit_ball(2);
        let u = real(&[-0.5, 0.0]);
        let v = real(&[0.5, 0.0]);
        let expect = closed::strip(-1.0, 1.0, Complex64::new(-0.5, 0.0), Complex64::new(0.5, 0.0));
        let lo = caratheodory_lower(&b, &u, &v).unwrap();
        let hi = lempert_upper(&b, &u, &v).unwrap();
        assert!((lo - expect).abs() < 1e-14);
        assert!(hi - lo < 1e-3);
        assert!((hi - expect).abs() < 1e-14);
        // the e_1 slab wins over every other sampled direction
        for k in 1..50 {
            let t = PI * k as f64 / 50.0;
            assert!(slab_distance(&b, &[t.cos(), t.sin()], &u, &v) <= expect + 1e-15);
        }
    }

    #[test]
    fn bounds_are_ordered_on_complex_points() {
        let b = ConvexBase::unit_ball(2);
        let pts = [
            ComplexPoint::new(vec![Complex64::new(0.1, 0.3), Complex64::new(-0.2, 1.0)]),
            ComplexPoint::new(vec![Complex64::new(0.5, -2.0), Complex64::new(0.3, 0.0)]),
            ComplexPoint::new(vec![Complex64::new(-0.6, 0.7), Complex64::new(0.0, -0.4)]),
        ];
        for u in &pts {
            for v in &pts {
                let lo = caratheodory_lower(&b, u, v).unwrap();
                let hi = lempert_upper(&b, u, v).unwrap();
                assert!(lo <= hi + 1e-12, "{lo} > {hi}");
            }
        }
    }

    #[test]
    fn rejects_points_outside() {
        let b = ConvexBase::unit_ball(1);
        assert!(caratheodory_lower(&b, &real(&[0.0]), &real(&[1.5])).is_err());
    }

    #[test]
    fn infinitesimal_bounds_exact_on_box_and_diameters() {
        let b = ConvexBase::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let z = real(&[0.3, 0.0]);
        let v = real(&[1.0, 0.5]);
        let (lo, hi) = infinitesimal_bounds(&b, &z, &v).unwrap();
        assert!((hi - lo).abs() < 1e-12);
        let ball = ConvexBase::unit_ball(2);
        let (lo, hi) = infinitesimal_bounds(&ball, &real(&[0.3, 0.0]), &real(&[1.0, 0.0])).unwrap();
        assert!((hi - lo).abs() < 1e-12);
        assert!((lo - closed::strip_density(-1.0, 1.0, Complex64::new(0.3, 0.0), Complex64::new(1.0, 0.0))).abs() < 1e-12);
    }
}
