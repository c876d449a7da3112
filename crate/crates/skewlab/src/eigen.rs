//! Hermitian eigendecomposition by cyclic complex Jacobi rotations, and
//! fractional matrix powers through the resulting spectral calculus.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Relative Hermiticity tolerance accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Convergence threshold on the off-diagonal Frobenius norm, relative to ‖M‖_F.
const OFF_DIAG_TOL: f64 = 1e-13;
/// Sweep cap before the solver reports non-convergence.
const MAX_SWEEPS: usize = 100;
/// Eigenvalues this close to zero are clamped to exactly zero before powering.
const EIGENVALUE_CLAMP: f64 = 1e-12;

/// Eigensystem of a Hermitian matrix: real eigenvalues sorted ascending and a
/// unitary whose columns are the matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary of eigenvectors; column i corresponds to eigenvalue i.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Reconstructs U diag(λ) U†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.weighted_projector_sum(|lambda| lambda)
    }

    /// Σ_i g(λ_i) |φ_i⟩⟨φ_i|.
    pub fn weighted_projector_sum(&self, g: impl Fn(f64) -> f64) -> ComplexMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| g(l)).collect();
        self.projector_sum(&weights)
    }

    /// Σ_i w_i |φ_i⟩⟨φ_i| with one weight per eigenvalue index.
    pub fn projector_sum(&self, weights: &[f64]) -> ComplexMatrix {
        assert_eq!(weights.len(), self.dim());
        let n = self.dim();
        let u = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| u[(i, k)] * weights[k] * u[(j, k)].conj())
                .sum()
        })
    }
}

/// Diagonalizes a Hermitian matrix with cyclic Jacobi rotations.
///
/// Deterministic for a fixed input: the sweep order is fixed and ties in the
/// final sort are broken by the pre-sort column index.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    m.check_finite()?;
    m.check_hermitian(HERMITIAN_TOL)?;

    let n = m.dim();
    // Work on the Hermitian average so tiny asymmetries within tolerance do
    // not leak into the iteration.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut u = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut converged = n <= 1 || off_diag_norm(&a) <= OFF_DIAG_TOL * scale;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence {
                sweeps,
                off: off_diag_norm(&a),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut u, p, q);
            }
        }
        sweeps += 1;
        converged = off_diag_norm(&a) <= OFF_DIAG_TOL * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, j| u[(i, order[j])]);

    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diag_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One two-sided Jacobi rotation zeroing A[p][q].
///
/// The rotation is R = I except R[p][p] = c, R[p][q] = −s̄, R[q][p] = s,
/// R[q][q] = c with c real, s = σ e^{−iφ}, φ = arg(A[p][q]); A ← R† A R and
/// the accumulated unitary picks up U ← U R.
fn rotate(a: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let phase = apq / abs;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let tau = (app - aqq) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = phase.conj() * (t * c);

    let n = a.dim();
    // Column update A ← A R.
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c + akq * s;
        a[(k, q)] = akq * c - akp * s.conj();
    }
    // Row update A ← R† A.
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c + aqk * s.conj();
        a[(q, k)] = aqk * c - apk * s;
    }
    // Clean the pivot pair: the diagonal stays real and the target entry is
    // zero by construction.
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let ukp = u[(k, p)];
        let ukq = u[(k, q)];
        u[(k, p)] = ukp * c + ukq * s;
        u[(k, q)] = ukq * c - ukp * s.conj();
    }
}

/// Fractional matrix power through the spectral calculus:
/// Σ_i λ_i^a |φ_i⟩⟨φ_i|.
///
/// Eigenvalues within 1e-12 of zero are clamped to zero first. Zero
/// eigenvalues reject negative exponents and negative eigenvalues reject
/// non-integer exponents.
pub fn frac_power(d: &SpectralDecomposition, a: f64) -> Result<ComplexMatrix> {
    let mut powered = Vec::with_capacity(d.dim());
    for &lambda in d.eigenvalues() {
        let lambda = if lambda.abs() <= EIGENVALUE_CLAMP {
            0.0
        } else {
            lambda
        };
        let value = if lambda > 0.0 {
            lambda.powf(a)
        } else if lambda == 0.0 {
            if a > 0.0 {
                0.0
            } else if a == 0.0 {
                1.0
            } else {
                return Err(Error::InvalidPower {
                    eigenvalue: lambda,
                    exponent: a,
                });
            }
        } else if a.fract() == 0.0 && a.abs() < 64.0 {
            lambda.powi(a as i32)
        } else {
            return Err(Error::InvalidPower {
                eigenvalue: lambda,
                exponent: a,
            });
        };
        powered.push(value);
    }
    Ok(d.projector_sum(&powered))
}
