//! Holomorphic coverings and monomial proper maps between model domains.

pub mod snf;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::base::{inverse_transpose, solve_square, ConvexBase};
use crate::domains::{log_coordinates, ModelDomain};
use crate::error::{Error, Result};
use crate::geodesics::AntipodalPair;
use crate::point::ComplexPoint;
use crate::scaling;

/// A square integer matrix with non-zero determinant; row `j` holds the
/// exponent vector of the `j`-th monomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntegerMatrix {
    rows: Vec<Vec<i64>>,
    det: i64,
}

impl TryFrom<Vec<Vec<i64>>> for IntegerMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::new(rows)
    }
}

impl From<IntegerMatrix> for Vec<Vec<i64>> {
    fn from(m: IntegerMatrix) -> Self {
        m.rows
    }
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(rows: &[Vec<i64>]) -> Result<i64> {
    let n = rows.len();
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    i64::try_from(sign * m[n - 1][n - 1]).map_err(|_| Error::Degenerate("determinant overflows i64".into()))
}

impl IntegerMatrix {
    /// Rejects non-square and singular matrices.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Degenerate("empty matrix".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: r.len() });
        }
        let det = bareiss_det(&rows)?;
        if det == 0 {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { rows, det })
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, 1)
    }

    /// `k I_n`.
    pub fn scalar(n: usize, k: i64) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { k } else { 0 }).collect())
            .collect();
        Self::new(rows).expect("non-zero scalar matrix")
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&v| v as f64).collect())
            .collect()
    }

    pub fn apply_real(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(x).map(|(&a, b)| a as f64 * b).sum())
            .collect()
    }

    /// `A^{-1} y` over the reals.
    pub fn solve_real(&self, y: &[f64]) -> Result<Vec<f64>> {
        solve_square(self.to_f64(), y.to_vec()).ok_or(Error::SingularMatrix)
    }

    /// `A^{-1} y` for complex `y`, real and imaginary parts separately.
    pub fn solve_complex(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let re = self.solve_real(&y.iter().map(|c| c.re).collect::<Vec<_>>())?;
        let im = self.solve_real(&y.iter().map(|c| c.im).collect::<Vec<_>>())?;
        Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
    }
}

/// A holomorphic map between two model domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum HolomorphicMap {
    Identity { domain: ModelDomain },
    /// `lambda -> lambda^n` on the punctured disc.
    Power { n: u32 },
    /// Coordinate-wise `exp` onto an annulus, punctured disc or Reinhardt
    /// domain from its logarithmic cover.
    ExpCover { target: ModelDomain },
    /// `Phi_A` restricted to `source`.
    Monomial { matrix: IntegerMatrix, source: ModelDomain },
    /// The scaling automorphism `A_t` of the unit ball.
    BallMobius { n: usize, t: f64 },
    /// Maps applied left to right.
    Compose { maps: Vec<HolomorphicMap> },
}

impl HolomorphicMap {
    pub fn power(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::Degenerate("power must be positive".into()));
        }
        Ok(Self::Power { n })
    }

    pub fn monomial(matrix: IntegerMatrix, source: ModelDomain) -> Result<Self> {
        let m = Self::Monomial { matrix, source };
        m.target()?;
        Ok(m)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity { .. } => "identity",
            Self::Power { .. } => "power",
            Self::ExpCover { .. } => "exp-cover",
            Self::Monomial { .. } => "monomial",
            Self::BallMobius { .. } => "ball-mobius",
            Self::Compose { .. } => "compose",
        }
    }

    /// The exponent matrix for power and monomial maps.
    pub fn monomial_matrix(&self) -> Option<IntegerMatrix> {
        match self {
            Self::Power { n } => Some(IntegerMatrix::scalar(1, *n as i64)),
            Self::Monomial { matrix, .. } => Some(matrix.clone()),
            _ => None,
        }
    }

    pub fn source(&self) -> Result<ModelDomain> {
        match self {
            Self::Identity { domain } => Ok(domain.clone()),
            Self::Power { .. } => Ok(ModelDomain::PuncturedDisc),
            Self::ExpCover { target } => match target {
                ModelDomain::Annulus { r } => Ok(ModelDomain::Strip { r: *r }),
                ModelDomain::PuncturedDisc => Ok(ModelDomain::LeftHalfPlane),
                ModelDomain::ReinhardtLog { base } => Ok(ModelDomain::Tube { base: base.clone() }),
                other => Err(Error::Unsupported(format!("no exponential cover of {}", other.name()))),
            },
            Self::Monomial { source, .. } => Ok(source.clone()),
            Self::BallMobius { n, t } => {
                scaling::ScalingParameter::new(*t)?;
                Ok(ModelDomain::ball(*n))
            }
            Self::Compose { maps } => maps
                .first()
                .ok_or_else(|| Error::Degenerate("empty composition".into()))?
                .source(),
        }
    }

    pub fn target(&self) -> Result<ModelDomain> {
        match self {
            Self::Identity { domain } => Ok(domain.clone()),
            Self::Power { .. } => Ok(ModelDomain::PuncturedDisc),
            Self::ExpCover { target } => {
                self.source()?;
                Ok(target.clone())
            }
            Self::Monomial { matrix, source } => {
                if matrix.dim() != source.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: source.dim(),
                        got: matrix.dim(),
                    });
                }
                let k = matrix.rows()[0][0];
                match source {
                    ModelDomain::ReinhardtLog { base } => Ok(ModelDomain::ReinhardtLog {
                        base: log_image(matrix, base)?,
                    }),
                    ModelDomain::PuncturedDisc if k > 0 => Ok(ModelDomain::PuncturedDisc),
                    ModelDomain::Annulus { r } => ModelDomain::annulus(r.powi(k.abs() as i32)),
                    other => Err(Error::Unsupported(format!(
                        "monomial map on {} with exponent {k}",
                        other.name()
                    ))),
                }
            }
            Self::BallMobius { .. } => self.source(),
            Self::Compose { maps } => {
                for w in maps.windows(2) {
                    if w[0].target()? != w[1].source()? {
                        return Err(Error::Degenerate(format!(
                            "cannot compose {} after {}",
                            w[1].name(),
                            w[0].name()
                        )));
                    }
                }
                maps.last()
                    .ok_or_else(|| Error::Degenerate("empty composition".into()))?
                    .target()
            }
        }
    }

    /// Evaluation without domain checks.
    pub fn apply_raw(&self, z: &ComplexPoint) -> Result<ComplexPoint> {
        match self {
            Self::Identity { .. } => Ok(z.clone()),
            Self::Power { n } => Ok(ComplexPoint::scalar(int_pow(z[0], *n as i64)?)),
            Self::ExpCover { .. } => Ok(z.map(|c| c.exp())),
            Self::Monomial { matrix, .. } => monomial_apply(matrix, z),
            Self::BallMobius { t, .. } => scaling::scaling_automorphism(*t, z),
            Self::Compose { maps } => {
                let mut p = z.clone();
                for m in maps {
                    p = m.apply_raw(&p)?;
                }
                Ok(p)
            }
        }
    }

    /// `F(z)`, requiring `z` in the source and `F(z)` in the target.
    pub fn apply(&self, z: &ComplexPoint) -> Result<ComplexPoint> {
        self.source()?.require_interior(z)?;
        let w = self.apply_raw(z)?;
        if !self.target()?.contains(&w)? {
            return Err(Error::ImageOutsideTarget { point: w.to_string() });
        }
        Ok(w)
    }

    /// `dF_z v` by a complex central difference.
    pub fn differential(&self, z: &ComplexPoint, v: &ComplexPoint) -> Result<ComplexPoint> {
        let h = 1e-6;
        let a = self.apply_raw(&(z + &v.scale_re(h)))?;
        let b = self.apply_raw(&(z - &v.scale_re(h)))?;
        Ok((&a - &b).scale_re(0.5 / h))
    }
}

/// `covering_apply` of the coverings module contract.
pub fn covering_apply(map: &HolomorphicMap, z: &ComplexPoint) -> Result<ComplexPoint> {
    map.apply(z)
}

fn int_pow(base: Complex64, e: i64) -> Result<Complex64> {
    if e == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut b = if e < 0 {
        if base.norm_sqr() == 0.0 {
            return Err(Error::Pole("zero base with negative exponent".into()));
        }
        Complex64::new(1.0, 0.0) / base
    } else {
        base
    };
    let mut k = e.unsigned_abs();
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= b;
        }
        b *= b;
        k >>= 1;
    }
    Ok(acc)
}

/// `z^alpha = prod z_j^{alpha_j}` by repeated squaring.
pub fn monomial_power(z: &ComplexPoint, alpha: &[i64]) -> Result<Complex64> {
    z.check_dim(alpha.len())?;
    let mut acc = Complex64::new(1.0, 0.0);
    for (c, &a) in z.coords().iter().zip(alpha) {
        acc *= int_pow(*c, a)?;
    }
    Ok(acc)
}

/// `Phi_A(z) = (z^{A^1}, ..., z^{A^n})`.
pub fn monomial_apply(a: &IntegerMatrix, z: &ComplexPoint) -> Result<ComplexPoint> {
    a.rows().iter().map(|row| monomial_power(z, row)).collect::<Result<Vec<_>>>().map(ComplexPoint)
}

/// All `|det A|` points of `(C^*)^n` mapped to `w` by `Phi_A`.
///
/// Moduli solve `A log|z| = log|w|`; arguments solve `A theta = arg w`
/// modulo `2 pi`, whose solutions on the torus are enumerated through the
/// Smith form `P A Q = D`: `theta = Q psi` with
/// `psi_i = ((P arg w)_i + 2 pi m_i) / d_i`, `0 <= m_i < d_i`.
pub fn monomial_preimages(a: &IntegerMatrix, w: &ComplexPoint) -> Result<Vec<ComplexPoint>> {
    let n = a.dim();
    w.check_dim(n)?;
    if let Some(j) = w.coords().iter().position(|c| c.norm() == 0.0) {
        return Err(Error::ZeroCoordinate { index: j });
    }
    let moduli = a.solve_real(&log_coordinates(w)?)?;
    let args: Vec<f64> = w.coords().iter().map(|c| c.arg()).collect();
    let s = snf::smith_normal_form(a.rows())?;
    let p_arg: Vec<f64> = s
        .p
        .iter()
        .map(|r| r.iter().zip(&args).map(|(&k, x)| k as f64 * x).sum())
        .collect();
    let mut out = Vec::with_capacity(a.det().unsigned_abs() as usize);
    let mut m = vec![0i64; n];
    loop {
        let psi: Vec<f64> = (0..n)
            .map(|i| (p_arg[i] + TAU * m[i] as f64) / s.d[i] as f64)
            .collect();
        let coords = (0..n)
            .map(|i| {
                let theta: f64 = (0..n).map(|j| s.q[i][j] as f64 * psi[j]).sum();
                Complex64::from_polar(moduli[i].exp(), theta.rem_euclid(TAU))
            })
            .collect();
        out.push(ComplexPoint(coords));
        // odometer over the residue classes
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            m[i] += 1;
            if m[i] < s.d[i] {
                break;
            }
            m[i] = 0;
            i += 1;
        }
    }
}

/// `A(base)`, the logarithmic image of `Phi_A(D)` when `log D = base`.
pub fn log_image(a: &IntegerMatrix, base: &ConvexBase) -> Result<ConvexBase> {
    base.linear_image(&a.to_f64())
}

/// The image `(A x, A y)` of an antipodal pair with the normal transported
/// by `A^{-T}` and the supporting-hyperplane certificate re-checked.
pub fn antipodal_image_check(a: &IntegerMatrix, pair: &AntipodalPair) -> Result<AntipodalPair> {
    let base = log_image(a, &pair.base)?;
    let inv_t = inverse_transpose(&a.to_f64()).ok_or(Error::SingularMatrix)?;
    let d: Vec<f64> = inv_t
        .iter()
        .map(|r| r.iter().zip(&pair.normal).map(|(p, q)| p * q).sum())
        .collect();
    AntipodalPair::new(base, a.apply_real(&pair.x), a.apply_real(&pair.y), Some(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn monomial_power_examples() {
        let z = ComplexPoint::new(vec![c(2.0, 0.0), c(3.0, 0.0)]);
        assert_eq!(monomial_power(&z, &[1, 1]).unwrap(), c(6.0, 0.0));
        assert_eq!(monomial_power(&z, &[0, 0]).unwrap(), c(1.0, 0.0));
        let z = ComplexPoint::new(vec![c(0.0, 1.0), c(2.0, 0.0)]);
        assert!((monomial_power(&z, &[2, -1]).unwrap() - c(-0.5, 0.0)).norm() < 1e-16);
        let zero = ComplexPoint::new(vec![c(0.0, 0.0), c(2.0, 0.0)]);
        assert!(monomial_power(&zero, &[-1, 0]).is_err());
    }

    #[test]
    fn matrix_validation() {
        assert!(IntegerMatrix::new(vec![vec![1, 2], vec![2, 4]]).is_err());
        assert_eq!(IntegerMatrix::new(vec![vec![3, 5], vec![-2, 7]]).unwrap().det(), 31);
        assert_eq!(IntegerMatrix::new(vec![vec![0, 1], vec![1, 0]]).unwrap().det(), -1);
        let m: IntegerMatrix = serde_json::from_str("[[1,1],[0,2]]").unwrap();
        assert_eq!(m.det(), 2);
        assert!(serde_json::from_str::<IntegerMatrix>("[[1,1],[2,2]]").is_err());
    }

    #[test]
    fn monomial_apply_examples() {
        let z = ComplexPoint::new(vec![c(0.3, 0.4), c(-1.2, 0.1)]);
        let sq = monomial_apply(&IntegerMatrix::scalar(2, 2), &z).unwrap();
        assert_eq!(sq, ComplexPoint::new(vec![z[0] * z[0], z[1] * z[1]]));
        assert_eq!(monomial_apply(&IntegerMatrix::identity(2), &z).unwrap(), z);
    }

    #[test]
    fn preimages_of_squares() {
        let a = IntegerMatrix::scalar(2, 2);
        let pre = monomial_preimages(&a, &ComplexPoint::from_real(&[1.0, 1.0])).unwrap();
        assert_eq!(pre.len(), 4);
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                let target = ComplexPoint::from_real(&[s1, s2]);
                assert!(pre.iter().any(|p| p.dist(&target) < 1e-15));
            }
        }
        let w = ComplexPoint::new(vec![c(0.3, -0.2), c(2.0, 1.0)]);
        let id = monomial_preimages(&IntegerMatrix::identity(2), &w).unwrap();
        assert_eq!(id.len(), 1);
        assert!(id[0].dist(&w) < 1e-15);
    }

    proptest! {
        #[test]
        fn preimage_count_and_consistency(
            a in prop::collection::vec(-3i64..=3, 4),
            re in prop::collection::vec(-2.0f64..2.0, 2),
            im in prop::collection::vec(-2.0f64..2.0, 2),
        ) {
            let Ok(m) = IntegerMatrix::new(vec![a[0..2].to_vec(), a[2..4].to_vec()]) else {
                return Ok(());
            };
            let w = ComplexPoint::new(vec![c(re[0], im[0]), c(re[1], im[1])]);
            prop_assume!(w.coords().iter().all(|v| v.norm() > 1e-3));
            let pre = monomial_preimages(&m, &w).unwrap();
            prop_assert_eq!(pre.len() as u64, m.det().unsigned_abs());
            for p in &pre {
                let back = monomial_apply(&m, p).unwrap();
                prop_assert!(back.max_abs_diff(&w) < 1e-10 * (1.0 + w.norm()));
            }
            // pairwise distinct
            for i in 0..pre.len() {
                for j in i + 1..pre.len() {
                    prop_assert!(pre[i].dist(&pre[j]) > 1e-9);
                }
            }
        }

        #[test]
        fn log_moduli_are_linear(
            re in prop::collection::vec(0.1f64..3.0, 2),
            arg in prop::collection::vec(-3.0f64..3.0, 2),
        ) {
            let m = IntegerMatrix::new(vec![vec![2, -1], vec![1, 3]]).unwrap();
            let z = ComplexPoint::new(vec![Complex64::from_polar(re[0], arg[0]), Complex64::from_polar(re[1], arg[1])]);
            let lhs = log_coordinates(&monomial_apply(&m, &z).unwrap()).unwrap();
            let rhs = m.apply_real(&log_coordinates(&z).unwrap());
            for (a, b) in lhs.iter().zip(&rhs) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn log_image_examples() {
        let b = ConvexBase::unit_ball(2);
        assert_eq!(log_image(&IntegerMatrix::scalar(2, 2), &b).unwrap(), ConvexBase::ball(vec![0.0, 0.0], 2.0).unwrap());
        assert_eq!(log_image(&IntegerMatrix::identity(2), &b).unwrap(), b);
        let shear = IntegerMatrix::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        let img = log_image(&shear, &ConvexBase::boxed(vec![0.0, 0.0], vec![1.0, 1.0]).unwrap()).unwrap();
        for v in [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]] {
            let p = shear.apply_real(&v);
            assert!(img.boundary_gap(&p).abs() < 1e-12);
        }
    }

    #[test]
    fn antipodal_images() {
        let pair = AntipodalPair::new(ConvexBase::unit_ball(2), vec![1.0, 0.0], vec![-1.0, 0.0], None).unwrap();
        let img = antipodal_image_check(&IntegerMatrix::scalar(2, 2), &pair).unwrap();
        assert_eq!((img.x.clone(), img.y.clone()), (vec![2.0, 0.0], vec![-2.0, 0.0]));
        let same = antipodal_image_check(&IntegerMatrix::identity(2), &pair).unwrap();
        assert_eq!((same.x, same.y), (pair.x.clone(), pair.y.clone()));
        let bx = ConvexBase::boxed(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let p = AntipodalPair::new(bx, vec![1.0, 0.3], vec![-1.0, -0.5], Some(vec![1.0, 0.0])).unwrap();
        let shear = IntegerMatrix::new(vec![vec![1, 1], vec![0, 1]]).unwrap();
        let img = antipodal_image_check(&shear, &p).unwrap();
        // A^{-T} e_1 = (1, -1)
        let n = &img.normal;
        assert!((n[0] + n[1]).abs() < 1e-12 && n[0] > 0.0);
    }

    #[test]
    fn covering_apply_examples() {
        let exp = HolomorphicMap::ExpCover {
            target: ModelDomain::ReinhardtLog { base: ConvexBase::unit_ball(2) },
        };
        assert_eq!(exp.apply(&ComplexPoint::zeros(2)).unwrap(), ComplexPoint::from_real(&[1.0, 1.0]));
        let p3 = HolomorphicMap::power(3).unwrap();
        assert!((p3.apply(&ComplexPoint::from_real(&[0.5])).unwrap()[0] - c(0.125, 0.0)).norm() < 1e-16);
        let e = HolomorphicMap::ExpCover { target: ModelDomain::annulus(1f64.exp()).unwrap() };
        let v = e.apply(&ComplexPoint::scalar(c(0.0, std::f64::consts::PI))).unwrap();
        assert!((v[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(p3.apply(&ComplexPoint::zeros(1)), Err(Error::NotInterior { .. })));
    }

    #[test]
    fn power_distance_is_min_over_deck_translates() {
        let n = 3;
        let f = HolomorphicMap::power(n).unwrap();
        let d = ModelDomain::PuncturedDisc;
        let pts = [c(0.4, 0.2), c(-0.1, 0.7), c(0.05, -0.3), c(-0.6, -0.6)];
        for a in pts {
            for b in pts {
                let fa = f.apply(&ComplexPoint::scalar(a)).unwrap();
                let fb = f.apply(&ComplexPoint::scalar(b)).unwrap();
                let target = metric::distance(&d, &fa, &fb).unwrap().value;
                let m = f.monomial_matrix().unwrap();
                let best = monomial_preimages(&m, &fb)
                    .unwrap()
                    .iter()
                    .map(|p| metric::distance(&d, &ComplexPoint::scalar(a), p).unwrap().value)
                    .fold(f64::INFINITY, f64::min);
                assert!((target - best).abs() < 1e-9, "{target} {best}");
            }
        }
    }

    #[test]
    fn coverings_are_local_isometries() {
        let cases: Vec<(HolomorphicMap, ComplexPoint)> = vec![
            (HolomorphicMap::power(2).unwrap(), ComplexPoint::scalar(c(0.3, -0.5))),
            (
                HolomorphicMap::ExpCover { target: ModelDomain::annulus(4.0).unwrap() },
                ComplexPoint::scalar(c(0.7, 2.0)),
            ),
            (
                HolomorphicMap::ExpCover { target: ModelDomain::PuncturedDisc },
                ComplexPoint::scalar(c(-0.4, 1.0)),
            ),
        ];
        for (f, z) in cases {
            let (src, tgt) = (f.source().unwrap(), f.target().unwrap());
            for v in [c(1.0, 0.0), c(0.3, -0.8)] {
                let v = ComplexPoint::scalar(v);
                let k0 = metric::infinitesimal_metric(&src, &z, &v).unwrap();
                let k1 = metric::infinitesimal_metric(&tgt, &f.apply(&z).unwrap(), &f.differential(&z, &v).unwrap()).unwrap();
                assert!((k0 - k1).abs() < 1e-8 * k0.max(1.0), "{} {k0} {k1}", f.name());
            }
        }
    }

    #[test]
    fn composition_checks_domains() {
        let good = HolomorphicMap::Compose {
            maps: vec![HolomorphicMap::power(2).unwrap(), HolomorphicMap::power(3).unwrap()],
        };
        let z = ComplexPoint::scalar(c(0.5, 0.5));
        let w = good.apply(&z).unwrap();
        assert!((w[0] - z[0].powi(6)).norm() < 1e-15);
        let bad = HolomorphicMap::Compose {
            maps: vec![HolomorphicMap::power(2).unwrap(), HolomorphicMap::BallMobius { n: 1, t: 0.5 }],
        };
        assert!(bad.target().is_err());
    }
}
