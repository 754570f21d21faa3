//! Scalar numerical routines shared by the engines.

use crate::error::{Error, Result};

/// Poincaré distance `arctanh(x)` of the unit disc, from `x^2` and `1 - x^2`
/// supplied separately so that callers can form `1 - x^2` without
/// cancellation. Evaluated as `0.5 * log1p(2x / (1 - x))`.
pub fn poincare(x2: f64, one_minus_x2: f64) -> f64 {
    let x = x2.max(0.0).sqrt();
    if x == 0.0 {
        return 0.0;
    }
    if one_minus_x2 <= 0.0 {
        return f64::INFINITY;
    }
    let one_minus_x = one_minus_x2 / (1.0 + x);
    0.5 * (2.0 * x / one_minus_x).ln_1p()
}

/// Same as [`poincare`] with `1 - x^2` given by its natural logarithm, for
/// pairs so far apart that `1 - x^2` underflows.
pub fn poincare_log(x2: f64, ln_one_minus_x2: f64) -> f64 {
    if ln_one_minus_x2 > -600.0 {
        return poincare(x2, ln_one_minus_x2.exp());
    }
    let x = x2.max(0.0).min(1.0).sqrt();
    // arctanh x = ln(1 + x) - 0.5 ln(1 - x^2)
    (1.0 + x).ln() - 0.5 * ln_one_minus_x2
}

/// `arctanh` through the stable route above.
pub fn arctanh(x: f64) -> f64 {
    let s = x.signum();
    let a = x.abs();
    s * poincare(a * a, (1.0 - a) * (1.0 + a))
}

/// Golden-section minimisation on `[a, b]`; returns `(argmin, min)`.
pub fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iter = 0;
    while (b - a).abs() > tol && iter < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
        iter += 1;
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Minimise `f` over `[a, b]` by a coarse scan followed by golden-section
/// refinement of the best bracket.
pub fn scan_min(f: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize, tol: f64) -> (f64, f64) {
    let step = (b - a) / samples as f64;
    let (k, _) = (0..=samples)
        .map(|k| (k, f(a + k as f64 * step)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("at least one sample");
    let c = a + k as f64 * step;
    let lo = (c - step).max(a);
    let hi = (c + step).min(b);
    let (x, v) = golden_min(&f, lo, hi, tol);
    let fc = f(c);
    if fc <= v {
        (c, fc)
    } else {
        (x, v)
    }
}

pub const SIMPSON_TOL: f64 = 1e-8;
pub const SIMPSON_MAX_DEPTH: u32 = 40;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`, refusing to recurse deeper than `max_depth`.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    // A single Simpson panel can alias peaked integrands; start from a fixed
    // split so every call sees at least 8 panels.
    let panels = 8;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == panels { b } else { lo + h };
        let flo = f(lo)?;
        let fhi = f(hi)?;
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid)?;
        let s = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        total += simpson_rec(f, lo, hi, flo, fmid, fhi, s, tol / panels as f64, max_depth)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::Quadrature(format!(
            "maximum depth reached on [{a}, {b}] (error estimate {:.3e})",
            delta.abs() / 15.0
        )));
    }
    Ok(simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

/// Radical inverse in base `b`, the building block of Halton sequences.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

/// Point `i` of the Halton sequence in `[0,1)^dim` (dim <= 8).
pub fn halton(i: u64, dim: usize) -> Vec<f64> {
    const PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];
    (0..dim).map(|k| radical_inverse(i + 1, PRIMES[k])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arctanh_agrees_with_std() {
        for x in [0.0, 1e-12, 0.3, -0.7, 0.999_999] {
            assert!((arctanh(x) - x.atanh()).abs() < 1e-12 * (1.0 + x.atanh().abs()));
        }
        // 1 - x^2 supplied exactly keeps precision near the boundary
        let eps = 1e-20;
        let d = poincare(1.0, eps);
        assert!((d - 0.5 * (4.0 / eps).ln()).abs() < 1e-12);
        assert!((poincare_log(1.0, -2000.0) - (2f64.ln() + 1000.0)).abs() < 1e-9);
    }

    #[test]
    fn simpson_integrates_polynomials_and_exp() {
        let f = |x: f64| Ok(x * x * x - 2.0 * x);
        let v = adaptive_simpson(&f, 0.0, 2.0, 1e-10, 40).unwrap();
        assert!((v - 0.0).abs() < 1e-12);
        let g = |x: f64| Ok(x.exp());
        let v = adaptive_simpson(&g, 0.0, 1.0, 1e-10, 40).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn simpson_reports_depth_exhaustion() {
        let f = |x: f64| Ok(1.0 / x.abs().sqrt().max(1e-300));
        assert!(adaptive_simpson(&f, -1.0, 1.0, 1e-12, 3).is_err());
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, v) = golden_min(|x| (x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn halton_is_in_unit_cube() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(3, 2), 0.75);
        for i in 0..100 {
            assert!(halton(i, 3).iter().all(|&v| (0.0..1.0).contains(&v)));
        }
    }
}
