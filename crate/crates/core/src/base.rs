//! Bounded convex bases in `R^n`: the logarithmic images of Reinhardt
//! domains and the real parts of tube domains.
//!
//! Every base answers two oracles, membership and the support function
//! `h(d) = sup { <d, x> : x in base }`, plus a few derived queries used by the
//! tube-metric bounds (ray exits, chords, inscribed ellipses).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{dot, norm};

/// Facet count used when approximating an ellipse by a polytope, per
/// coordinate plane.
pub const ELLIPSE_FACETS_PER_PLANE: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// `{ x : <normal_k, x> < offset_k for all k }`, bounded, with its vertex
/// set cached at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolytopeRaw", into = "PolytopeRaw")]
pub struct Polytope {
    half_spaces: Vec<HalfSpace>,
    vertices: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeRaw {
    half_spaces: Vec<HalfSpace>,
}

impl TryFrom<PolytopeRaw> for Polytope {
    type Error = Error;
    fn try_from(raw: PolytopeRaw) -> Result<Self> {
        Polytope::new(raw.half_spaces)
    }
}

impl From<Polytope> for PolytopeRaw {
    fn from(p: Polytope) -> Self {
        PolytopeRaw {
            half_spaces: p.half_spaces,
        }
    }
}

impl Polytope {
    pub fn new(half_spaces: Vec<HalfSpace>) -> Result<Self> {
        let n = half_spaces
            .first()
            .map(|h| h.normal.len())
            .ok_or_else(|| Error::InvalidDomain("polytope without half-spaces".into()))?;
        if n == 0 || half_spaces.iter().any(|h| h.normal.len() != n) {
            return Err(Error::InvalidDomain("inconsistent half-space dimensions".into()));
        }
        if half_spaces
            .iter()
            .any(|h| norm(&h.normal) == 0.0 || !h.offset.is_finite())
        {
            return Err(Error::InvalidDomain("degenerate half-space".into()));
        }
        // Clip by a huge box: a vertex on the box means the polytope is unbounded.
        const FAR: f64 = 1e8;
        let mut clipped = half_spaces.clone();
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            clipped.push(HalfSpace { normal: e.clone(), offset: FAR });
            e[j] = -1.0;
            clipped.push(HalfSpace { normal: e, offset: FAR });
        }
        let all = enumerate_vertices(&clipped, n);
        if all.is_empty() {
            return Err(Error::InvalidDomain("empty polytope".into()));
        }
        if all.iter().any(|v| v.iter().any(|x| x.abs() > FAR * 0.5)) {
            return Err(Error::InvalidDomain("unbounded polytope".into()));
        }
        let p = Self {
            half_spaces,
            vertices: all,
        };
        let centroid = p.centroid();
        if p.slack(&centroid) <= 1e-12 {
            return Err(Error::InvalidDomain("polytope has empty interior".into()));
        }
        Ok(p)
    }

    pub fn half_spaces(&self) -> &[HalfSpace] {
        &self.half_spaces
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    fn dim(&self) -> usize {
        self.half_spaces[0].normal.len()
    }

    fn centroid(&self) -> Vec<f64> {
        let n = self.dim();
        let mut c = vec![0.0; n];
        for v in &self.vertices {
            for j in 0..n {
                c[j] += v[j];
            }
        }
        c.iter().map(|x| x / self.vertices.len() as f64).collect()
    }

    /// Smallest normalised slack `(b - <n, x>) / |n|` over all facets.
    fn slack(&self, x: &[f64]) -> f64 {
        self.half_spaces
            .iter()
            .map(|h| (h.offset - dot(&h.normal, x)) / norm(&h.normal))
            .fold(f64::INFINITY, f64::min)
    }
}

fn enumerate_vertices(hs: &[HalfSpace], n: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<&HalfSpace> = idx.iter().map(|&i| &hs[i]).collect();
        if let Some(x) = solve_square(
            rows.iter().map(|h| h.normal.clone()).collect(),
            rows.iter().map(|h| h.offset).collect(),
        ) {
            let feasible = hs.iter().all(|h| {
                dot(&h.normal, &x) <= h.offset + 1e-9 * (1.0 + h.offset.abs())
            });
            if feasible && !out.iter().any(|v| dist(v, &x) < 1e-9) {
                out.push(x);
            }
        }
        // next combination
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] < hs.len() - n + i {
                idx[i] += 1;
                for k in i + 1..n {
                    idx[k] = idx[k - 1] + 1;
                }
                break;
            }
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub(crate) fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// A bounded open convex set in `R^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConvexBase {
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Polytope(Polytope),
}

impl ConvexBase {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let b = Self::Ball { center, radius };
        b.validate()?;
        Ok(b)
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::Ball {
            center: vec![0.0; n],
            radius: 1.0,
        }
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let b = Self::Box { lo, hi };
        b.validate()?;
        Ok(b)
    }

    /// The interval `(-a, a)`, the base of the strip `H_R` with `a = log R`.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::boxed(vec![lo], vec![hi])
    }

    pub fn polytope(half_spaces: Vec<HalfSpace>) -> Result<Self> {
        Ok(Self::Polytope(Polytope::new(half_spaces)?))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Ball { center, radius } => {
                if center.is_empty() || !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidDomain("ball needs radius > 0".into()));
                }
                if center.iter().any(|x| !x.is_finite()) {
                    return Err(Error::InvalidDomain("non-finite ball center".into()));
                }
            }
            Self::Box { lo, hi } => {
                if lo.is_empty() || lo.len() != hi.len() {
                    return Err(Error::InvalidDomain("box bounds of unequal length".into()));
                }
                if lo.iter().zip(hi).any(|(l, h)| !(l.is_finite() && h.is_finite() && l < h)) {
                    return Err(Error::InvalidDomain("box with empty interior".into()));
                }
            }
            Self::Polytope(p) => {
                Polytope::new(p.half_spaces.clone())?;
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } => center.len(),
            Self::Box { lo, .. } => lo.len(),
            Self::Polytope(p) => p.dim(),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().all(|v| v.is_finite()) && self.boundary_gap(x) > 0.0
    }

    /// Signed Euclidean distance to the boundary, positive inside.
    pub fn boundary_gap(&self, x: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => radius - dist(x, center),
            Self::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| (v - l).min(h - v))
                .fold(f64::INFINITY, f64::min),
            Self::Polytope(p) => p.slack(x),
        }
    }

    /// Support function `h(d) = sup <d, x>` over the base.
    pub fn support(&self, d: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => dot(d, center) + radius * norm(d),
            Self::Box { lo, hi } => d
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(dj, (l, h))| (dj * l).max(dj * h))
                .sum(),
            Self::Polytope(p) => p
                .vertices
                .iter()
                .map(|v| dot(d, v))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// Outward normals of the flat faces (empty for the ball).
    pub fn facet_normals(&self) -> Vec<Vec<f64>> {
        match self {
            Self::Ball { .. } => Vec::new(),
            Self::Box { lo, .. } => {
                let n = lo.len();
                let mut out = Vec::with_capacity(2 * n);
                for j in 0..n {
                    let mut e = vec![0.0; n];
                    e[j] = 1.0;
                    out.push(e.clone());
                    e[j] = -1.0;
                    out.push(e);
                }
                out
            }
            Self::Polytope(p) => p
                .half_spaces
                .iter()
                .map(|h| {
                    let l = norm(&h.normal);
                    h.normal.iter().map(|v| v / l).collect()
                })
                .collect(),
        }
    }

    /// Largest `s >= 0` with `x + s * dir` in the closure; `x` must be interior.
    pub fn ray_exit(&self, x: &[f64], dir: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => {
                let q: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let vv = dot(dir, dir);
                if vv == 0.0 {
                    return f64::INFINITY;
                }
                let qv = dot(&q, dir);
                let c = radius * radius - dot(&q, &q);
                // positive root of vv s^2 + 2 qv s - c = 0, written without cancellation
                let disc = (qv * qv + vv * c).max(0.0).sqrt();
                if qv <= 0.0 {
                    (disc - qv) / vv
                } else {
                    c / (disc + qv)
                }
            }
            Self::Box { lo, hi } => x
                .iter()
                .zip(dir)
                .zip(lo.iter().zip(hi))
                .filter(|((_, d), _)| **d != 0.0)
                .map(|((v, d), (l, h))| if *d > 0.0 { (h - v) / d } else { (l - v) / d })
                .fold(f64::INFINITY, f64::min),
            Self::Polytope(p) => p
                .half_spaces
                .iter()
                .filter_map(|h| {
                    let nd = dot(&h.normal, dir);
                    (nd > 0.0).then(|| (h.offset - dot(&h.normal, x)) / nd)
                })
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// The open chord `{ x + s dir : lo < s < hi }` through an interior point.
    pub fn chord(&self, x: &[f64], dir: &[f64]) -> (f64, f64) {
        let back: Vec<f64> = dir.iter().map(|v| -v).collect();
        (-self.ray_exit(x, &back), self.ray_exit(x, dir))
    }

    /// Largest `rho` such that `p + rho (cos t a + sin t b)` stays in the
    /// closure for every `t`; `p` must be interior.
    pub fn ellipse_fit(&self, p: &[f64], a: &[f64], b: &[f64]) -> f64 {
        let spread = |n: &[f64]| dot(n, a).hypot(dot(n, b));
        match self {
            Self::Ball { center, radius } => {
                if norm(a) == 0.0 && norm(b) == 0.0 {
                    return f64::INFINITY;
                }
                let q: Vec<f64> = p.iter().zip(center).map(|(x, c)| x - c).collect();
                let slack = radius * radius - dot(&q, &q);
                if slack <= 0.0 {
                    return 0.0;
                }
                let (qa, qb) = (dot(&q, a), dot(&q, b));
                let (aa, bb, ab) = (dot(a, a), dot(b, b), dot(a, b));
                // exit distance along v(t) = cos t a + sin t b
                let exit = |t: f64| {
                    let (c, s) = (t.cos(), t.sin());
                    let qv = c * qa + s * qb;
                    let vv = c * c * aa + 2.0 * c * s * ab + s * s * bb;
                    if vv <= 0.0 {
                        return f64::INFINITY;
                    }
                    slack / (qv + (qv * qv + vv * slack).sqrt())
                };
                let samples = 128;
                let step = std::f64::consts::TAU / samples as f64;
                let (best_k, _) = (0..samples)
                    .map(|k| (k, exit(k as f64 * step)))
                    .min_by(|x, y| x.1.total_cmp(&y.1))
                    .unwrap();
                let centre = best_k as f64 * step;
                let (_, v) = crate::numerics::golden_min(exit, centre - step, centre + step, 1e-13);
                // guard against the refinement landing above a sampled value
                v.min(exit(centre)) * (1.0 - 1e-12)
            }
            Self::Box { lo, hi } => p
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let s = a[j].hypot(b[j]);
                    if s == 0.0 {
                        f64::INFINITY
                    } else {
                        (hi[j] - v).min(v - lo[j]) / s
                    }
                })
                .fold(f64::INFINITY, f64::min),
            Self::Polytope(poly) => poly
                .half_spaces
                .iter()
                .map(|h| {
                    let s = spread(&h.normal);
                    if s == 0.0 {
                        f64::INFINITY
                    } else {
                        (h.offset - dot(&h.normal, p)) / s
                    }
                })
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.dim();
        let mut lo = vec![0.0; n];
        let mut hi = vec![0.0; n];
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            hi[j] = self.support(&e);
            e[j] = -1.0;
            lo[j] = -self.support(&e);
        }
        (lo, hi)
    }

    /// Image under an invertible real matrix (rows of `m`).
    ///
    /// Balls map to balls under scalar matrices; otherwise the image ellipsoid
    /// is replaced by its circumscribed polytope with
    /// [`ELLIPSE_FACETS_PER_PLANE`] facet normals in every coordinate plane.
    /// Boxes and polytopes map exactly via the inverse transpose.
    pub fn linear_image(&self, m: &[Vec<f64>]) -> Result<Self> {
        let n = self.dim();
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: m.len(),
            });
        }
        let inv_t = inverse_transpose(m).ok_or(Error::SingularMatrix)?;
        let apply = |x: &[f64]| -> Vec<f64> { m.iter().map(|r| dot(r, x)).collect() };
        match self {
            Self::Ball { center, radius } => {
                if let Some(s) = scalar_multiple(m) {
                    return Self::ball(apply(center), radius * s.abs());
                }
                // support of the image: h(d) = <m^T d, c> + r |m^T d|
                let mt_d = |d: &[f64]| -> Vec<f64> {
                    (0..n).map(|j| (0..n).map(|i| m[i][j] * d[i]).sum()).collect()
                };
                let mut normals = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        for k in 0..ELLIPSE_FACETS_PER_PLANE {
                            let t = std::f64::consts::TAU * k as f64 / ELLIPSE_FACETS_PER_PLANE as f64;
                            let mut d = vec![0.0; n];
                            d[i] = t.cos();
                            d[j] = t.sin();
                            normals.push(d);
                        }
                    }
                }
                if n == 1 {
                    normals.push(vec![1.0]);
                    normals.push(vec![-1.0]);
                }
                let hs = normals
                    .into_iter()
                    .map(|d| {
                        let md = mt_d(&d);
                        HalfSpace {
                            offset: dot(&md, center) + radius * norm(&md),
                            normal: d,
                        }
                    })
                    .collect();
                Self::polytope(hs)
            }
            Self::Box { lo, hi } => {
                let mut hs = Vec::new();
                for j in 0..n {
                    let mut e = vec![0.0; n];
                    e[j] = 1.0;
                    hs.push(HalfSpace { normal: e.clone(), offset: hi[j] });
                    e[j] = -1.0;
                    hs.push(HalfSpace { normal: e, offset: -lo[j] });
                }
                Self::polytope(transform_half_spaces(&hs, &inv_t))
            }
            Self::Polytope(p) => Self::polytope(transform_half_spaces(&p.half_spaces, &inv_t)),
        }
    }
}

fn transform_half_spaces(hs: &[HalfSpace], inv_t: &[Vec<f64>]) -> Vec<HalfSpace> {
    // <n, x> < b with x = M^{-1} y  <=>  <M^{-T} n, y> < b
    hs.iter()
        .map(|h| HalfSpace {
            normal: inv_t.iter().map(|r| dot(r, &h.normal)).collect(),
            offset: h.offset,
        })
        .collect()
}

fn scalar_multiple(m: &[Vec<f64>]) -> Option<f64> {
    let s = m[0][0];
    let ok = m.iter().enumerate().all(|(i, r)| {
        r.iter()
            .enumerate()
            .all(|(j, &v)| if i == j { v == s } else { v == 0.0 })
    });
    ok.then_some(s)
}

/// `(M^{-1})^T` for a small dense real matrix.
pub(crate) fn inverse_transpose(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve_square(m.to_vec(), e)?);
    }
    // cols[j] is column j of M^{-1}, i.e. row j of M^{-T}
    Some(cols)
}
