//! Dense complex matrices and the handful of operator-algebra primitives the
//! rest of the crate is built on: commutators, anti-commutators and traces of
//! ordered products.

use num_complex::Complex64;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense square complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries. Fails on ragged or non-finite
    /// input or when the row count is zero.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let m = ComplexMatrix { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix { dim: self.dim, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix { dim: self.dim, data })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Checks ‖M − M†‖ against a relative tolerance on the Frobenius scale.
    pub fn check_hermitian(&self, rel_tol: f64) -> Result<()> {
        let scale = self.frobenius_norm().max(1.0);
        let dev = self.sub(&self.adjoint()).expect("same dims").frobenius_norm();
        if dev <= rel_tol * scale {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                deviation: dev,
                tol: rel_tol * scale,
            })
        }
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// [X, Y] = XY − YX. Skew-Hermitian when X and Y are Hermitian.
pub fn commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.matmul(y)?.sub(&y.matmul(x)?)
}

/// {X, Y} = XY + YX. Hermitian when X and Y are Hermitian.
pub fn anti_commutator(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    x.matmul(y)?.add(&y.matmul(x)?)
}

/// Trace of the ordered product of the factors. Invariant under cyclic
/// permutation of the list.
pub fn trace_product(factors: &[&ComplexMatrix]) -> Result<Complex64> {
    let (first, rest) = factors.split_first().ok_or(Error::EmptyProduct)?;
    let mut acc = (*first).clone();
    for f in rest {
        acc = acc.matmul(f)?;
    }
    Ok(acc.trace())
}
