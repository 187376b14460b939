//! Small dense complex matrices (d ≤ 4) stored inline.
//!
//! Every state in this crate lives in a Hilbert space of dimension 2, 3 or 4,
//! so a fixed 4×4 backing array avoids heap traffic in the integrator hot
//! loops. Entries outside the active `dim × dim` block are always zero.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use nalgebra::{Matrix2, Matrix3, Matrix4};
use num_complex::Complex64;

pub const MAX_DIM: usize = 4;

pub const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A `dim × dim` complex matrix with `dim ≤ 4`.
#[derive(Clone, Copy, PartialEq)]
pub struct CMat {
    dim: usize,
    data: [[Complex64; MAX_DIM]; MAX_DIM],
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "matrix dimension {dim} out of range"
        );
        Self {
            dim,
            data: [[ZERO; MAX_DIM]; MAX_DIM],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i][i] = ONE;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i][i] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries; panics if `rows` is not square.
    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            m.data[i][..dim].copy_from_slice(row);
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, &x) in row.iter().enumerate() {
                m.data[i][j] = Complex64::new(x, 0.0);
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[i][j] = self.data[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i][i]).sum()
    }

    /// `Tr(self · other)` without forming the product.
    #[inline]
    pub fn trace_product(&self, other: &CMat) -> Complex64 {
        debug_assert_eq!(self.dim, other.dim);
        let mut acc = ZERO;
        for i in 0..self.dim {
            for k in 0..self.dim {
                acc += self.data[i][k] * other.data[k][i];
            }
        }
        acc
    }

    pub fn scale(&self, s: f64) -> Self {
        self.scale_complex(Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[i][j] *= s;
            }
        }
        out
    }

    /// `self += s · other`
    #[inline]
    pub fn add_scaled(&mut self, other: &CMat, s: f64) {
        debug_assert_eq!(self.dim, other.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.data[i][j] += other.data[i][j] * s;
            }
        }
    }

    pub fn commutator(&self, other: &CMat) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &CMat) -> Self {
        *self * *other + *other * *self
    }

    /// `self · rho · self†`
    #[inline]
    pub fn sandwich(&self, rho: &CMat) -> Self {
        *self * *rho * self.adjoint()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise deviation from Hermiticity, `max |A_ij − conj(A_ji)|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Kronecker product; the result must fit in 4×4.
    pub fn kron(&self, other: &CMat) -> Self {
        let dim = self.dim * other.dim;
        let mut out = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.data[i * other.dim + k][j * other.dim + l] =
                            self.data[i][j] * other.data[k][l];
                    }
                }
            }
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.dim).flat_map(move |i| (0..self.dim).map(move |j| self.data[i][j]))
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (*self + self.adjoint()).scale(0.5)
    }

    /// Eigenvalues of the Hermitian part of the matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = self.hermitian_part();
        let mut ev: Vec<f64> = match self.dim {
            1 => vec![h.data[0][0].re],
            2 => {
                let m = Matrix2::from_fn(|i, j| h.data[i][j]);
                m.symmetric_eigenvalues().iter().copied().collect()
            }
            3 => {
                let m = Matrix3::from_fn(|i, j| h.data[i][j]);
                m.symmetric_eigenvalues().iter().copied().collect()
            }
            _ => {
                let m = Matrix4::from_fn(|i, j| h.data[i][j]);
                m.symmetric_eigenvalues().iter().copied().collect()
            }
        };
        ev.sort_by(f64::total_cmp);
        ev
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &self.data[i][j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.dim && j < self.dim);
        &mut self.data[i][j]
    }
}

impl Add for CMat {
    type Output = CMat;
    #[inline]
    fn add(mut self, rhs: CMat) -> CMat {
        self += rhs;
        self
    }
}

impl AddAssign for CMat {
    #[inline]
    fn add_assign(&mut self, rhs: CMat) {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.data[i][j] += rhs.data[i][j];
            }
        }
    }
}

impl Sub for CMat {
    type Output = CMat;
    #[inline]
    fn sub(mut self, rhs: CMat) -> CMat {
        self -= rhs;
        self
    }
}

impl SubAssign for CMat {
    #[inline]
    fn sub_assign(&mut self, rhs: CMat) {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                self.data[i][j] -= rhs.data[i][j];
            }
        }
    }
}

impl Neg for CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale(-1.0)
    }
}

impl Mul for CMat {
    type Output = CMat;
    #[inline]
    fn mul(self, rhs: CMat) -> CMat {
        debug_assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i][j] += a * rhs.data[k][j];
                }
            }
        }
        out
    }
}

impl Mul<f64> for CMat {
    type Output = CMat;
    fn mul(self, rhs: f64) -> CMat {
        self.scale(rhs)
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.data[i][j];
                write!(f, "{:>+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
