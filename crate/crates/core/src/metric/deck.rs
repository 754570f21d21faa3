//! Distances on domains covered by `exp`: the minimum of the cover distance
//! over all deck translates `v + 2 pi i nu`, `nu in Z^n`.
//!
//! The search is finite and certified: after reducing `Im(v - u)` into
//! `(-pi, pi]^n`, any `nu` with `|nu|_inf >= B + 1` has some coordinate whose
//! imaginary gap is at least `2 pi (B + 1) - pi`, and a strip projection of
//! that coordinate bounds the cover distance from below. The search stops as
//! soon as that bound exceeds the best value found.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{closed, tube, DistanceValue, Method};
use crate::base::ConvexBase;
use crate::domains::ModelDomain;
use crate::error::{Error, Result};
use crate::point::ComplexPoint;

/// A deck transformation `v -> v + 2 pi i nu` of an exponential covering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DeckIndex(pub Vec<i64>);

impl DeckIndex {
    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }

    pub fn translate(&self, v: &ComplexPoint) -> ComplexPoint {
        ComplexPoint(
            v.coords()
                .iter()
                .zip(&self.0)
                .map(|(c, &k)| c + Complex64::new(0.0, TAU * k as f64))
                .collect(),
        )
    }
}

impl std::fmt::Display for DeckIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

enum Cover<'a> {
    HalfPlane,
    Strip { lo: f64, hi: f64 },
    Tube(&'a ConvexBase),
}

impl<'a> Cover<'a> {
    fn of(domain: &'a ModelDomain) -> Result<Self> {
        match domain {
            ModelDomain::LeftHalfPlane => Ok(Self::HalfPlane),
            ModelDomain::Strip { r } => Ok(Self::Strip { lo: -r.ln(), hi: r.ln() }),
            ModelDomain::Tube { base } => Ok(Self::Tube(base)),
            other => Err(Error::Unsupported(format!(
                "{} is not the cover of an exponential covering",
                other.name()
            ))),
        }
    }

    fn exact(&self) -> bool {
        !matches!(self, Self::Tube(_))
    }

    /// Bracket of the cover distance; the upper bound is skipped (returned
    /// as infinity) when the lower bound already reaches `cutoff`.
    fn bracket(&self, u: &ComplexPoint, v: &ComplexPoint, cutoff: f64) -> Result<(f64, f64)> {
        match self {
            Self::HalfPlane => {
                let d = closed::left_half_plane(u[0], v[0]);
                Ok((d, d))
            }
            Self::Strip { lo, hi } => {
                let d = closed::strip(*lo, *hi, u[0], v[0]);
                Ok((d, d))
            }
            Self::Tube(base) => {
                let lo = tube::caratheodory_lower(base, u, v)?;
                if lo >= cutoff {
                    return Ok((lo, f64::INFINITY));
                }
                let hi = tube::lempert_upper(base, u, v)?;
                Ok((lo.min(hi), hi))
            }
        }
    }

    /// Lower bound for every translate whose largest imaginary coordinate
    /// gap is at least `im_gap`.
    fn shell_lower(&self, u: &ComplexPoint, v: &ComplexPoint, im_gap: f64) -> f64 {
        match self {
            Self::HalfPlane => closed::left_half_plane_with_im_gap(u[0].re, v[0].re, im_gap),
            Self::Strip { lo, hi } => closed::strip_with_im_gap(*lo, *hi, u[0].re, v[0].re, im_gap),
            Self::Tube(base) => {
                let (lo, hi) = base.bounding_box();
                (0..base.dim())
                    .map(|j| closed::strip_with_im_gap(lo[j], hi[j], u[j].re, v[j].re, im_gap))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

/// Integer vectors with `|nu|_inf == b` in dimension `n`.
fn shell(n: usize, b: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![-b; n];
    loop {
        if cur.iter().any(|k| k.abs() == b) {
            out.push(cur.clone());
        }
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            if cur[j] < b {
                cur[j] += 1;
                break;
            }
            cur[j] = -b;
            j += 1;
        }
    }
}

/// Minimises the cover distance `K(u, v + 2 pi i nu)` over `nu`, searching
/// shells `|nu - nu_0|_inf <= lattice_bound` around the reduced translate
/// `nu_0`. Returns the attained minimum and its minimiser.
pub fn deck_infimum(
    cover: &ModelDomain,
    u: &ComplexPoint,
    v: &ComplexPoint,
    lattice_bound: u32,
) -> Result<(DistanceValue, DeckIndex)> {
    let n = cover.dim();
    u.check_dim(n)?;
    v.check_dim(n)?;
    cover.require_interior(u)?;
    cover.require_interior(v)?;
    let cov = Cover::of(cover)?;
    let nu0: Vec<i64> = u
        .coords()
        .iter()
        .zip(v.coords())
        .map(|(a, b)| -((b.im - a.im) / TAU).round() as i64)
        .collect();
    let mut best_hi = f64::INFINITY;
    let mut best_lo = f64::INFINITY;
    let mut best_nu = nu0.clone();
    for b in 0..=lattice_bound as i64 {
        for off in shell(n, b) {
            let nu: Vec<i64> = nu0.iter().zip(&off).map(|(a, o)| a + o).collect();
            let cand = DeckIndex(nu.clone()).translate(v);
            let (lo, hi) = cov.bracket(u, &cand, best_hi)?;
            best_lo = best_lo.min(lo);
            if hi < best_hi {
                best_hi = hi;
                best_nu = nu;
            }
        }
        let bound = cov.shell_lower(u, v, TAU * (b + 1) as f64 - PI);
        if bound > best_hi {
            let value = if cov.exact() {
                DistanceValue::exact(best_hi, Method::DeckInfimum)
            } else {
                DistanceValue::bracket(best_lo, best_hi, Method::DeckInfimum)
            };
            let idx = DeckIndex(best_nu);
            return Ok((value.with_deck(idx.clone()), idx));
        }
        if b == lattice_bound as i64 {
            return Err(Error::DeckNotCertified {
                bound: lattice_bound,
                gap: best_hi - bound,
            });
        }
    }
    unreachable!("loop returns at the last shell")
}
