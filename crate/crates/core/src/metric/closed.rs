//! Closed-form Kobayashi distances and infinitesimal metrics.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::numerics::{poincare, poincare_log};
use crate::point::ComplexPoint;

/// Distance in the unit disc.
pub fn disc(z: Complex64, w: Complex64) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm_sqr();
    let x2 = (z - w).norm_sqr() / den;
    let omx2 = one_minus_sq(z.norm()) * one_minus_sq(w.norm()) / den;
    poincare(x2, omx2)
}

/// Distance in the unit ball of `C^n` (Möbius-invariant formula).
///
/// `|phi_z(w)|^2` is formed as `(|z - w|^2 - sum_{i<j} |z_i w_j - z_j w_i|^2)
/// / |1 - <z, w>|^2`, which stays accurate for nearby points close to the
/// sphere.
pub fn ball(z: &ComplexPoint, w: &ComplexPoint) -> f64 {
    let den = (Complex64::new(1.0, 0.0) - z.inner(w)).norm_sqr();
    let omx2 = one_minus_sq(z.norm()) * one_minus_sq(w.norm()) / den;
    let (a, b) = (z.coords(), w.coords());
    let mut cross = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            cross += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    let x2 = ((z - w).norm_sqr() - cross).max(0.0) / den;
    poincare(x2, omx2)
}

/// Distance in the ball of radius `r` centred at the origin.
pub fn ball_radius(z: &ComplexPoint, w: &ComplexPoint, r: f64) -> f64 {
    ball(&z.scale_re(1.0 / r), &w.scale_re(1.0 / r))
}

/// Distance in the unit polydisc: the largest coordinate disc distance.
pub fn polydisc(z: &ComplexPoint, w: &ComplexPoint) -> f64 {
    z.coords()
        .iter()
        .zip(w.coords())
        .map(|(a, b)| disc(*a, *b))
        .fold(0.0, f64::max)
}

/// Distance in the vertical strip `{ lo < Re < hi }`.
///
/// The strip is mapped onto the upper half-plane by
/// `zeta -> exp(i pi (zeta - lo) / (hi - lo))`; the half-plane formula is then
/// rewritten in terms of `sinh` and `sin` so that no difference of nearly
/// equal numbers is formed.
pub fn strip(lo: f64, hi: f64, p: Complex64, q: Complex64) -> f64 {
    let w = hi - lo;
    let a1 = PI * (p.re - lo) / w;
    let a2 = PI * (q.re - lo) / w;
    let db = PI * (p.im - q.im) / w;
    strip_parts(a1, a2, db)
}

pub(crate) fn strip_parts(a1: f64, a2: f64, db: f64) -> f64 {
    let sd = (0.5 * (a1 - a2)).sin().powi(2);
    let ss = (0.5 * (a1 + a2)).sin().powi(2);
    let prod = a1.sin() * a2.sin();
    if db.abs() < 600.0 {
        let sh = (0.5 * db).sinh().powi(2);
        let den = sh + ss;
        poincare((sh + sd) / den, prod / den)
    } else {
        // sinh^2(db/2) ~ exp(|db|) / 4
        let ln_den = db.abs() - 4f64.ln();
        poincare_log(1.0, prod.ln() - ln_den)
    }
}

/// Distance in the left half-plane `{ Re < 0 }`.
pub fn left_half_plane(p: Complex64, q: Complex64) -> f64 {
    let dy = p.im - q.im;
    let num = (p.re - q.re).powi(2) + dy * dy;
    let sx = p.re + q.re;
    let den = sx * sx + dy * dy;
    poincare(num / den, 4.0 * p.re * q.re / den)
}

/// Strip distance with the imaginary separation supplied directly.
pub(crate) fn strip_with_im_gap(lo: f64, hi: f64, x1: f64, x2: f64, im_gap: f64) -> f64 {
    strip(lo, hi, Complex64::new(x1, 0.0), Complex64::new(x2, im_gap))
}

pub(crate) fn left_half_plane_with_im_gap(x1: f64, x2: f64, im_gap: f64) -> f64 {
    left_half_plane(Complex64::new(x1, 0.0), Complex64::new(x2, im_gap))
}

pub fn disc_density(z: Complex64, v: Complex64) -> f64 {
    v.norm() / one_minus_sq(z.norm())
}

pub fn ball_density(z: &ComplexPoint, v: &ComplexPoint) -> f64 {
    let s = one_minus_sq(z.norm());
    let zv = v.inner(z).norm_sqr();
    (s * v.norm_sqr() + zv).sqrt() / s
}

pub fn polydisc_density(z: &ComplexPoint, v: &ComplexPoint) -> f64 {
    z.coords()
        .iter()
        .zip(v.coords())
        .map(|(a, b)| disc_density(*a, *b))
        .fold(0.0, f64::max)
}

pub fn strip_density(lo: f64, hi: f64, z: Complex64, v: Complex64) -> f64 {
    let w = hi - lo;
    let a = PI * (z.re - lo) / w;
    PI / (2.0 * w) * v.norm() / a.sin()
}

pub fn left_half_plane_density(z: Complex64, v: Complex64) -> f64 {
    v.norm() / (2.0 * z.re.abs())
}

fn one_minus_sq(r: f64) -> f64 {
    (1.0 - r) * (1.0 + r)
}

/// The involutive ball automorphism `phi_a` exchanging `a` and `0`.
pub fn ball_involution(a: &ComplexPoint, z: &ComplexPoint) -> ComplexPoint {
    let aa = a.norm_sqr();
    let za = z.inner(a);
    let den = Complex64::new(1.0, 0.0) - za;
    if aa == 0.0 {
        return z.scale_re(-1.0);
    }
    let s = (one_minus_sq(a.norm())).sqrt();
    // P_a z = (<z,a>/<a,a>) a ; Q_a z = z - P_a z
    let pz = a.scale(za / aa);
    let qz = z - &pz;
    let num = &(a - &pz) - &qz.scale_re(s);
    num.scale(Complex64::new(1.0, 0.0) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn disc_examples() {
        assert_eq!(disc(c(0.0, 0.0), c(0.0, 0.0)), 0.0);
        assert!((disc(c(0.0, 0.0), c(0.5, 0.0)) - 0.5f64.atanh()).abs() < 1e-15);
        assert!((disc_density(c(0.0, 0.0), c(1.0, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(disc_density(c(0.3, 0.1), c(0.0, 0.0)), 0.0);
    }

    #[test]
    fn ball_slice_is_poincare() {
        for r in [0.1, 0.5, 0.9, 0.999] {
            let d = ball(&ComplexPoint::zeros(2), &ComplexPoint::from_real(&[r, 0.0]));
            assert!((d - r.atanh()).abs() < 1e-14 * (1.0 + r.atanh()));
        }
    }

    #[test]
    fn strip_matches_tan_map_on_real_points() {
        // |Re| < 1 is mapped to the disc by tan(pi z / 4)
        for (a, b) in [(0.0, 0.4), (-0.9, 0.3), (0.2, 0.95)] {
            let wa: f64 = (PI * a / 4.0).tan();
            let wb: f64 = (PI * b / 4.0).tan();
            let expect = ((wa - wb) / (1.0 - wa * wb)).abs().atanh();
            let got = strip(-1.0, 1.0, c(a, 0.0), c(b, 0.0));
            assert!((got - expect).abs() < 1e-14, "{got} {expect}");
        }
        // midline vertical line is a geodesic with speed pi / (4a)
        let d = strip(-2.0, 2.0, c(0.0, -3.0), c(0.0, 5.0));
        assert!((d - PI * 8.0 / 8.0).abs() < 1e-13);
    }

    #[test]
    fn strip_far_apart_is_finite() {
        let near = strip(-1.0, 1.0, c(0.1, 0.0), c(-0.3, 380.0));
        let far = strip(-1.0, 1.0, c(0.1, 0.0), c(-0.3, 400.0));
        assert!(near.is_finite() && far.is_finite() && far > near);
    }

    #[test]
    fn half_plane_real_points() {
        let d = left_half_plane(c(-1.0, 0.0), c(-4.0, 0.0));
        assert!((d - 0.5 * 4f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn involution_swaps_and_squares_to_identity() {
        let a = ComplexPoint::new(vec![c(0.3, -0.2), c(0.1, 0.4)]);
        let z = ComplexPoint::new(vec![c(-0.5, 0.1), c(0.2, 0.2)]);
        assert!(ball_involution(&a, &a).norm() < 1e-15);
        assert!(ball_involution(&a, &ComplexPoint::zeros(2)).dist(&a) < 1e-15);
        assert!(ball_involution(&a, &ball_involution(&a, &z)).dist(&z) < 1e-14);
        let w = ComplexPoint::new(vec![c(0.1, 0.1), c(-0.6, 0.0)]);
        let d0 = ball(&z, &w);
        let d1 = ball(&ball_involution(&a, &z), &ball_involution(&a, &w));
        assert!((d0 - d1).abs() < 1e-13);
    }
}
