use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of `C^N`, stored as its complex coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexPoint(pub Vec<Complex64>);

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        Self(coords)
    }

    pub fn from_real(xs: &[f64]) -> Self {
        Self(xs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn scalar(z: Complex64) -> Self {
        Self(vec![z])
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    /// The unit vector `e_1 = (1, 0, ..., 0)`.
    pub fn e1(n: usize) -> Self {
        let mut p = Self::zeros(n);
        p.0[0] = Complex64::new(1.0, 0.0);
        p
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Hermitian product `<self, other> = sum self_j * conj(other_j)`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    pub fn re(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.im).collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self(self.0.iter().map(|&c| f(c)).collect())
    }

    /// Euclidean distance to another point.
    pub fn dist(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }

    /// Total order on points used to canonicalise argument order.
    pub(crate) fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            let o = a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im));
            if o.is_ne() {
                return o;
            }
        }
        self.dim().cmp(&other.dim())
    }
}

impl Index<usize> for ComplexPoint {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for &ComplexPoint {
    type Output = ComplexPoint;
    fn add(self, rhs: &ComplexPoint) -> ComplexPoint {
        ComplexPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &ComplexPoint {
    type Output = ComplexPoint;
    fn sub(self, rhs: &ComplexPoint) -> ComplexPoint {
        ComplexPoint(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &ComplexPoint {
    type Output = ComplexPoint;
    fn mul(self, rhs: f64) -> ComplexPoint {
        self.scale_re(rhs)
    }
}

impl From<Vec<Complex64>> for ComplexPoint {
    fn from(v: Vec<Complex64>) -> Self {
        Self(v)
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, ")")
    }
}

/// Parses `"0.5"`, `"0.1+0.2i"` or comma separated coordinates `"0.1,0.2i"`.
impl std::str::FromStr for ComplexPoint {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let coords = s
            .split(',')
            .map(|part| {
                let part = part.trim();
                part.parse::<Complex64>()
                    .map_err(|e| format!("bad coordinate '{part}': {e}"))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if coords.is_empty() {
            return Err("empty point".into());
        }
        Ok(Self(coords))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
