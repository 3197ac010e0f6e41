//! Complex vector primitives, seeded random streams and the two random
//! samplers every other module builds on: i.i.d. `CN(0,1)` vectors and
//! Haar-distributed orthonormal bases.

mod linalg;
mod stream;

pub use linalg::CMatrix;
pub use stream::{RandomStream, StreamRng};

use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Index;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Squared residual norm below which a Gram-Schmidt column counts as
/// linearly dependent and the draw is rejected.
const DEGENERATE_NORM_SQR: f64 = 1e-20;

/// Finite, non-empty complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec(Vec<Complex64>);

impl ComplexVec {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(ComplexVec(entries))
    }

    /// Real-valued convenience constructor.
    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Standard basis vector `e_index` in `dim` dimensions.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} >= dim {dim}");
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[index] = Complex64::new(1.0, 0.0);
        ComplexVec(v)
    }

    // Internal constructor for values that are finite by construction.
    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!(!entries.is_empty());
        ComplexVec(entries)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, factor: Complex64) -> ComplexVec {
        ComplexVec(self.0.iter().map(|z| z * factor).collect())
    }

    /// `self† other`, without the dimension check.
    #[inline]
    pub(crate) fn dot_unchecked(&self, other: &ComplexVec) -> Complex64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
    }
}

impl Index<usize> for ComplexVec {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// `a† b`: conjugate-linear in the first argument.
pub fn inner_product(a: &ComplexVec, b: &ComplexVec) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.dot_unchecked(b))
}

/// One circularly-symmetric complex Gaussian sample with unit variance.
#[inline]
pub fn sample_cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Vector of `dim` i.i.d. `CN(0,1)` entries.
pub fn sample_gaussian_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ComplexVec> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    Ok(ComplexVec((0..dim).map(|_| sample_cn01(rng)).collect()))
}

/// Isotropic unit vector (normalized Gaussian).
pub fn sample_unit_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<ComplexVec> {
    loop {
        let g = sample_gaussian_vec(rng, dim)?;
        let n = g.norm();
        if n > 0.0 {
            return Ok(g.scale(Complex64::new(1.0 / n, 0.0)));
        }
    }
}

/// Haar-distributed orthonormal basis of `C^dim`.
///
/// Orthonormalizes the columns of a `dim x dim` i.i.d. Gaussian matrix
/// with modified Gram-Schmidt (one reorthogonalization pass). The
/// triangular factor produced this way has a positive real diagonal,
/// which is the phase normalization that makes the unitary factor
/// Haar-uniform. Numerically singular draws are rejected and redrawn.
pub fn sample_haar_basis<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Result<Vec<ComplexVec>> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    'draw: loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| sample_cn01(rng)).collect())
            .collect();
        for j in 0..dim {
            let (done, rest) = cols.split_at_mut(j);
            let col = &mut rest[0];
            for _pass in 0..2 {
                for q in done.iter() {
                    let proj: Complex64 = q
                        .iter()
                        .zip(col.iter())
                        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b);
                    for (c, qi) in col.iter_mut().zip(q) {
                        *c -= proj * qi;
                    }
                }
            }
            let nsq: f64 = col.iter().map(|z| z.norm_sqr()).sum();
            if nsq < DEGENERATE_NORM_SQR {
                continue 'draw;
            }
            let inv = 1.0 / nsq.sqrt();
            for c in col.iter_mut() {
                *c *= inv;
            }
        }
        return Ok(cols.into_iter().map(ComplexVec).collect());
    }
}
