//! Minimal dense complex linear algebra.
//!
//! Everything downstream works with at most 2x2 systems (stacked channel
//! patterns, residual covariances), so this module stays deliberately small:
//! products, Hermitian transpose, analytic 2x2 inverse / log-determinant, and
//! a Hermitian square-root factor for sampling correlated complex Gaussians.
//! Complex values are `num_complex::Complex64`, i.e. (re, im) pairs in double
//! precision.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Shorthand used across the crate.
pub type C64 = Complex64;

/// |det| below this is treated as singular. The residual covariance always
/// carries a sigma^2-scaled diagonal, so valid runs never get close.
pub const SINGULARITY_THRESHOLD: f64 = 1e-30;

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Self {
        assert!(!entries.is_empty(), "empty vector");
        Self { entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(vec![C64::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> C64 {
        self.entries[i]
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `self^H other` (conjugates self).
    pub fn dot_h(&self, other: &ComplexVector) -> C64 {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn sub(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        ComplexVector::new(
            self.entries
                .iter()
                .zip(other.entries.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn add(&self, other: &ComplexVector) -> ComplexVector {
        assert_eq!(self.len(), other.len(), "length mismatch");
        ComplexVector::new(
            self.entries
                .iter()
                .zip(other.entries.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Interprets the vector as a 1 x n matrix (a row).
    pub fn as_row(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec(1, self.len(), self.entries.clone())
    }
}

/// Serialized as parallel re/im arrays so JSON stays flat and readable.
#[derive(Serialize, Deserialize)]
struct SplitComplex {
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for ComplexVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SplitComplex {
            re: self.entries.iter().map(|z| z.re).collect(),
            im: self.entries.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let split = SplitComplex::deserialize(d)?;
        if split.re.len() != split.im.len() || split.re.is_empty() {
            return Err(serde::de::Error::custom("re/im arrays must be nonempty and equal length"));
        }
        Ok(ComplexVector::new(
            split
                .re
                .into_iter()
                .zip(split.im)
                .map(|(re, im)| C64::new(re, im))
                .collect(),
        ))
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(rows * cols, data.len(), "shape does not match data length");
        assert!(rows > 0 && cols > 0, "degenerate shape");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec(rows, cols, vec![C64::ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, C64::ONE);
        }
        m
    }

    /// Builds a 2x2 matrix by stacking two length-2 rows.
    pub fn stack_rows2(top: &ComplexVector, bottom: &ComplexVector) -> Self {
        assert_eq!(top.len(), 2, "top row must have length 2");
        assert_eq!(bottom.len(), 2, "bottom row must have length 2");
        Self::from_vec(2, 2, vec![top.get(0), top.get(1), bottom.get(0), bottom.get(1)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> ComplexVector {
        ComplexVector::new(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_vec(self.rows, self.cols, self.data.iter().map(|z| z * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Self::from_vec(
            self.rows,
            self.cols,
            self.data.iter().zip(other.data.iter()).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix product; errors on non-conformable shapes.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut acc = C64::ZERO;
            for k in 0..self.cols {
                acc += self.get(i, k) * v.get(k);
            }
            out.push(acc);
        }
        Ok(ComplexVector::new(out))
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// True when the matrix equals its conjugate transpose elementwise
    /// within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.rows == self.cols && self.max_abs_diff(&self.hermitian()) <= tol
    }

    /// Determinant of a 2x2 matrix.
    pub fn det2(&self) -> C64 {
        assert_eq!((self.rows, self.cols), (2, 2), "det2 requires a 2x2 matrix");
        self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0)
    }

    /// Analytic 2x2 inverse; errors when |det| falls below
    /// [`SINGULARITY_THRESHOLD`].
    pub fn inv2(&self) -> Result<Self> {
        assert_eq!((self.rows, self.cols), (2, 2), "inv2 requires a 2x2 matrix");
        let det = self.det2();
        let abs_det = det.norm();
        if abs_det <= SINGULARITY_THRESHOLD {
            return Err(Error::SingularMatrix {
                abs_det,
                threshold: SINGULARITY_THRESHOLD,
            });
        }
        let inv_det = C64::ONE / det;
        Ok(Self::from_vec(
            2,
            2,
            vec![
                self.get(1, 1) * inv_det,
                -self.get(0, 1) * inv_det,
                -self.get(1, 0) * inv_det,
                self.get(0, 0) * inv_det,
            ],
        ))
    }

    /// Base-2 log-determinant of a 2x2 Hermitian positive-definite matrix.
    pub fn logdet2(&self) -> Result<f64> {
        assert_eq!((self.rows, self.cols), (2, 2), "logdet2 requires a 2x2 matrix");
        let scale = 1.0 + self.frobenius_norm();
        if !self.is_hermitian(1e-9 * scale) {
            return Err(Error::NotPositiveDefinite("matrix is not Hermitian".into()));
        }
        let a = self.get(0, 0).re;
        let det = self.det2().re;
        if a <= 0.0 || det <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!(
                "leading minors {a:.3e}, {det:.3e} must be positive"
            )));
        }
        Ok(det.log2())
    }

    /// Eigenvalues of a 2x2 Hermitian matrix, ascending.
    pub fn eigvals2_hermitian(&self) -> (f64, f64) {
        assert_eq!((self.rows, self.cols), (2, 2));
        let a = self.get(0, 0).re;
        let d = self.get(1, 1).re;
        let b2 = self.get(0, 1).norm_sqr();
        let mean = 0.5 * (a + d);
        let disc = (0.25 * (a - d) * (a - d) + b2).sqrt();
        (mean - disc, mean + disc)
    }

    /// Hermitian square-root factor S of a Hermitian PSD matrix (S·S = A,
    /// S = S^H). Only sizes 1 and 2 are supported; covariances in this crate
    /// never grow beyond 2x2.
    pub fn hermitian_sqrt(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "square root of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let scale = 1.0 + self.frobenius_norm();
        if !self.is_hermitian(1e-9 * scale) {
            return Err(Error::NotPositiveDefinite("matrix is not Hermitian".into()));
        }
        match self.rows {
            1 => {
                let a = self.get(0, 0).re;
                if a < -1e-12 * scale {
                    return Err(Error::NotPositiveDefinite(format!("negative entry {a:.3e}")));
                }
                Ok(Self::from_vec(1, 1, vec![C64::new(a.max(0.0).sqrt(), 0.0)]))
            }
            2 => {
                let (lo, _hi) = self.eigvals2_hermitian();
                if lo < -1e-9 * scale {
                    return Err(Error::NotPositiveDefinite(format!(
                        "smallest eigenvalue {lo:.3e}"
                    )));
                }
                let trace = self.get(0, 0).re + self.get(1, 1).re;
                let det = self.det2().re.max(0.0);
                // sqrt(A) = (A + sqrt(det) I) / sqrt(trace + 2 sqrt(det))
                let s = (trace + 2.0 * det.sqrt()).sqrt();
                if s <= 1e-300 {
                    return Ok(Self::zeros(2, 2));
                }
                let shift = Self::identity(2).scale(det.sqrt());
                Ok(self.add(&shift).scale(1.0 / s))
            }
            n => Err(Error::DimensionMismatch(format!(
                "hermitian_sqrt supports sizes 1 and 2, got {n}"
            ))),
        }
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Split {
            rows: usize,
            cols: usize,
            re: Vec<f64>,
            im: Vec<f64>,
        }
        Split {
            rows: self.rows,
            cols: self.cols,
            re: self.data.iter().map(|z| z.re).collect(),
            im: self.data.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Split {
            rows: usize,
            cols: usize,
            re: Vec<f64>,
            im: Vec<f64>,
        }
        let split = Split::deserialize(d)?;
        if split.re.len() != split.im.len() || split.re.len() != split.rows * split.cols {
            return Err(serde::de::Error::custom("re/im arrays do not match shape"));
        }
        if split.rows == 0 || split.cols == 0 {
            return Err(serde::de::Error::custom("degenerate shape"));
        }
        Ok(ComplexMatrix::from_vec(
            split.rows,
            split.cols,
            split
                .re
                .into_iter()
                .zip(split.im)
                .map(|(re, im)| C64::new(re, im))
                .collect(),
        ))
    }
}

/// One draw of a circularly-symmetric complex scalar with unit variance
/// (re and im each carry half).
pub fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * std::f64::consts::FRAC_1_SQRT_2, im * std::f64::consts::FRAC_1_SQRT_2)
}

/// Samples a zero-mean complex Gaussian vector with the given covariance.
///
/// Draws z with i.i.d. unit-variance circularly-symmetric entries and returns
/// S z, where S is the Hermitian square-root factor of `cov`, so the sample
/// covariance converges to `cov`.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(
    cov: &ComplexMatrix,
    rng: &mut R,
) -> Result<ComplexVector> {
    let factor = cov.hermitian_sqrt()?;
    let z = ComplexVector::new((0..cov.cols()).map(|_| standard_complex(rng)).collect());
    factor.mul_vec(&z)
}
