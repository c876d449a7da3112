//! Validated quantum states and observables, centering, variance/covariance,
//! and reproducible random sampling for the Monte-Carlo verification loops.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::str::FromStr;

use crate::eigen::{eig_hermitian, frac_power, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{trace_product, ComplexMatrix};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-10;
/// Default invertibility floor on the eigenvalues of a density matrix.
pub const DEFAULT_EIGEN_FLOOR: f64 = 1e-8;

/// A validated quantum state: Hermitian, PSD, unit trace, with its
/// eigensystem cached for the spectral-calculus paths.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spectrum: SpectralDecomposition,
    eigen_floor: f64,
}

impl DensityMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigen_floor(&self) -> f64 {
        self.eigen_floor
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum.min_eigenvalue()
    }

    /// ρ^a through the cached spectrum.
    pub fn power(&self, a: f64) -> Result<ComplexMatrix> {
        frac_power(&self.spectrum, a)
    }
}

/// A Hermitian observable.
#[derive(Clone, Debug)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.check_finite()?;
        matrix.check_hermitian(HERMITIAN_TOL)?;
        Ok(Observable { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// H − Tr[ρH]·I together with the subtracted mean.
#[derive(Clone, Debug)]
pub struct CenteredObservable {
    matrix: ComplexMatrix,
    mean: f64,
}

impl CenteredObservable {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// Validates ρ: Hermitian, unit trace, PSD, and (when `eigen_floor > 0`)
/// invertible with min eigenvalue at least the floor.
pub fn validate_density(m: &ComplexMatrix, eigen_floor: f64) -> Result<DensityMatrix> {
    m.check_finite()?;
    m.check_hermitian(HERMITIAN_TOL)?;
    let trace = m.trace();
    if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
        return Err(Error::InvalidTrace { trace: trace.re });
    }
    let spectrum = eig_hermitian(m)?;
    let min = spectrum.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::NegativeEigenvalue { eigenvalue: min });
    }
    // Small absolute slack so states mixed exactly onto the floor are not
    // rejected for eigensolver round-off.
    if eigen_floor > 0.0 && min < eigen_floor - 1e-12 {
        return Err(Error::BelowEigenFloor {
            eigenvalue: min,
            floor: eigen_floor,
        });
    }
    Ok(DensityMatrix {
        matrix: m.clone(),
        spectrum,
        eigen_floor,
    })
}

/// H_0 = H − Tr[ρH]·I. Idempotent: centering a centered observable subtracts
/// a zero mean.
pub fn center(rho: &DensityMatrix, h: &Observable) -> Result<CenteredObservable> {
    let mean = trace_product(&[rho.matrix(), h.matrix()])?.re;
    let shifted = h
        .matrix()
        .sub(&ComplexMatrix::identity(h.dim()).scale_re(mean))?;
    Ok(CenteredObservable {
        matrix: shifted,
        mean,
    })
}

/// V_ρ(H) = Tr[ρH²] − Tr[ρH]².
pub fn variance(rho: &DensityMatrix, h: &Observable) -> Result<f64> {
    let mean = trace_product(&[rho.matrix(), h.matrix()])?.re;
    let second = trace_product(&[rho.matrix(), h.matrix(), h.matrix()])?.re;
    Ok(second - mean * mean)
}

/// Cov_ρ(A,B) = Tr[ρ A_0 B_0]; complex in general, with
/// Cov(A,A) = V(A) and Cov(A,B) = conj(Cov(B,A)).
pub fn covariance(rho: &DensityMatrix, a: &Observable, b: &Observable) -> Result<Complex64> {
    let a0 = center(rho, a)?;
    let b0 = center(rho, b)?;
    trace_product(&[rho.matrix(), a0.matrix(), b0.matrix()])
}

/// Configuration for the random samplers.
#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    pub dim: usize,
    pub seed: u64,
    pub eigen_floor: f64,
}

impl SamplerConfig {
    pub fn new(dim: usize, seed: u64, eigen_floor: f64) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidParam("dim must be at least 1".into()));
        }
        if !(0.0..1.0 / dim as f64).contains(&eigen_floor) {
            return Err(Error::InvalidParam(format!(
                "eigen floor {eigen_floor} outside [0, 1/{dim})"
            )));
        }
        Ok(SamplerConfig {
            dim,
            seed,
            eigen_floor,
        })
    }

    /// Counter-based stream for one trial: deterministic in (seed, index) and
    /// independent of the order trials execute in.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        trial_stream(self.seed, index)
    }
}

/// ChaCha stream keyed by seed with the trial index as stream id.
pub fn trial_stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn complex_gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Hilbert–Schmidt random state: GG†/Tr[GG†] with Ginibre G, then mixed with
/// I/dim by the smallest ε ∈ {0, dim·δ} that lifts the minimum eigenvalue to
/// the floor δ.
pub fn sample_density(cfg: &SamplerConfig, rng: &mut impl Rng) -> Result<DensityMatrix> {
    let g = ginibre(cfg.dim, rng);
    let w = g.matmul(&g.adjoint())?;
    let trace = w.trace().re;
    let mut rho = w.scale_re(1.0 / trace);

    let spectrum = eig_hermitian(&rho)?;
    if spectrum.min_eigenvalue() < cfg.eigen_floor {
        let eps = cfg.dim as f64 * cfg.eigen_floor;
        let mixed = rho
            .scale_re(1.0 - eps)
            .add(&ComplexMatrix::identity(cfg.dim).scale_re(eps / cfg.dim as f64))?;
        rho = mixed;
    }
    validate_density(&rho, cfg.eigen_floor)
}

/// GUE-style random observable: (G + G†)/2 with Ginibre G.
pub fn sample_observable(cfg: &SamplerConfig, rng: &mut impl Rng) -> Result<Observable> {
    let g = ginibre(cfg.dim, rng);
    Observable::new(g.add(&g.adjoint())?.scale_re(0.5))
}

/// The 2×2 Pauli fixtures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    Id,
}

impl FromStr for Pauli {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" => Ok(Pauli::X),
            "y" => Ok(Pauli::Y),
            "z" => Ok(Pauli::Z),
            "id" => Ok(Pauli::Id),
            other => Err(Error::InvalidParam(format!("unknown Pauli name: {other}"))),
        }
    }
}

pub fn pauli(name: Pauli) -> Observable {
    let i = Complex64::I;
    let rows = match name {
        Pauli::X => vec![
            vec![Complex64::ZERO, Complex64::ONE],
            vec![Complex64::ONE, Complex64::ZERO],
        ],
        Pauli::Y => vec![
            vec![Complex64::ZERO, -i],
            vec![i, Complex64::ZERO],
        ],
        Pauli::Z => vec![
            vec![Complex64::ONE, Complex64::ZERO],
            vec![Complex64::ZERO, -Complex64::ONE],
        ],
        Pauli::Id => vec![
            vec![Complex64::ONE, Complex64::ZERO],
            vec![Complex64::ZERO, Complex64::ONE],
        ],
    };
    let matrix = ComplexMatrix::from_rows(&rows).expect("fixed 2x2 entries");
    Observable::new(matrix).expect("Pauli matrices are Hermitian")
}
