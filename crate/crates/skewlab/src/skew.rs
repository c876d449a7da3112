//! The scalar information quantities: variance-adjacent skew informations
//! I, J and U in one- and two-parameter forms, each with a trace-formula path
//! and an independent spectral-sum path for cross-validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::trace_product;
use crate::states::{center, variance, DensityMatrix, Observable};

/// Quantities within this distance below zero are treated as round-off and
/// clamped before square roots.
pub const NEGATIVE_CLAMP: f64 = 1e-12;
/// Agreement demanded between the trace and spectral paths, relative to
/// max(1, I).
pub const DUAL_PATH_TOL: f64 = 1e-9;

/// Parameter region of the (α, β) plane. The main uncertainty relation is
/// asserted on `LeHalf` (α+β ≤ 1/2) and `GeOne` (α+β ≥ 1); the strip between
/// them is left open and only ever reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    LeHalf,
    GeOne,
    Gap,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::LeHalf => "le_half",
            Region::GeOne => "ge_one",
            Region::Gap => "gap",
        }
    }

    /// Whether the two-parameter uncertainty relation is asserted here.
    pub fn asserted(self) -> bool {
        self != Region::Gap
    }
}

/// The (α, β) pair of the two-parameter skew information family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SkewParams {
    alpha: f64,
    beta: f64,
}

impl SkewParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || alpha < 0.0 || beta < 0.0 {
            return Err(Error::InvalidParam(format!(
                "alpha and beta must be finite and nonnegative, got ({alpha}, {beta})"
            )));
        }
        Ok(SkewParams { alpha, beta })
    }

    /// The one-parameter family: (α, 1−α) with α ∈ [0, 1].
    pub fn one_parameter(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParam(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        SkewParams::new(alpha, 1.0 - alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sum(&self) -> f64 {
        self.alpha + self.beta
    }

    /// Boundary values α+β ∈ {1/2, 1} classify into the asserted regions.
    pub fn region(&self) -> Region {
        let k = self.sum();
        if k <= 0.5 {
            Region::LeHalf
        } else if k >= 1.0 {
            Region::GeOne
        } else {
            Region::Gap
        }
    }

    pub fn swapped(&self) -> Self {
        SkewParams {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

/// f_a(x, y) = x^a y^{1−a} + x^{1−a} y^a for positive x, y. Symmetric in
/// (x, y) and under a ↔ 1−a.
pub fn f_weight(x: f64, y: f64, a: f64) -> Result<f64> {
    if x <= 0.0 || y <= 0.0 {
        return Err(Error::InvalidParam(format!(
            "f_weight requires positive arguments, got ({x}, {y})"
        )));
    }
    Ok(x.powf(a) * y.powf(1.0 - a) + x.powf(1.0 - a) * y.powf(a))
}

// Same weight on eigenvalues, tolerant of clean zeros (0^0 = 1, 0^a = 0 for
// a > 0). Negative exponents with a zero argument are excluded upstream by
// the eigen-floor precondition.
fn f_weight_eig(x: f64, y: f64, a: f64) -> f64 {
    let x = x.max(0.0);
    let y = y.max(0.0);
    x.powf(a) * y.powf(1.0 - a) + x.powf(1.0 - a) * y.powf(a)
}

fn clamp_nonneg(x: f64) -> f64 {
    if x < 0.0 {
        0.0
    } else {
        x
    }
}

fn check_dims(rho: &DensityMatrix, h: &Observable) -> Result<()> {
    if rho.dim() == h.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: h.dim(),
        })
    }
}

// α+β > 1 puts a negative power of ρ in play; demand the recorded
// invertibility floor.
fn check_floor(rho: &DensityMatrix, p: &SkewParams) -> Result<()> {
    if p.sum() > 1.0 && rho.eigen_floor() <= 0.0 {
        return Err(Error::BelowEigenFloor {
            eigenvalue: rho.min_eigenvalue(),
            floor: rho.eigen_floor(),
        });
    }
    Ok(())
}

/// The four traces of the expanded two-parameter forms, on centered H_0:
/// (Tr[ρH_0²], Tr[ρ^{α+β}H_0ρ^{1−α−β}H_0], Tr[ρ^αH_0ρ^{1−α}H_0],
/// Tr[ρ^βH_0ρ^{1−β}H_0]).
fn four_traces(rho: &DensityMatrix, h: &Observable, p: &SkewParams) -> Result<[f64; 4]> {
    let h0 = center(rho, h)?;
    let h0 = h0.matrix();
    let cross = |a: f64| -> Result<f64> {
        let left = rho.power(a)?;
        let right = rho.power(1.0 - a)?;
        Ok(trace_product(&[&left, h0, &right, h0])?.re)
    };
    let t1 = trace_product(&[rho.matrix(), h0, h0])?.re;
    Ok([t1, cross(p.sum())?, cross(p.alpha())?, cross(p.beta())?])
}

/// Two-parameter skew information I_{ρ,α,β}(H), trace-formula path.
///
/// Reduces to the one-parameter I_{ρ,α}(H) at β = 1−α and to the
/// Wigner–Yanase information at α = β = 1/2.
pub fn skew_i(rho: &DensityMatrix, h: &Observable, p: &SkewParams) -> Result<f64> {
    check_dims(rho, h)?;
    check_floor(rho, p)?;
    let [t1, tk, ta, tb] = four_traces(rho, h, p)?;
    Ok(0.5 * (t1 + tk - ta - tb))
}

/// Companion quantity J_{ρ,α,β}(H) (anti-commutator form), trace path.
pub fn skew_j(rho: &DensityMatrix, h: &Observable, p: &SkewParams) -> Result<f64> {
    check_dims(rho, h)?;
    check_floor(rho, p)?;
    let [t1, tk, ta, tb] = four_traces(rho, h, p)?;
    Ok(0.5 * (t1 + tk + ta + tb))
}

// Off-diagonal squared matrix elements |⟨φ_i|H_0|φ_j⟩|² for i < j, paired
// with the eigenvalues (λ_i, λ_j).
fn offdiag_elements(rho: &DensityMatrix, h: &Observable) -> Result<Vec<(f64, f64, f64)>> {
    let h0 = center(rho, h)?;
    let u = rho.spectrum().eigenvectors();
    let in_basis = u.adjoint().matmul(h0.matrix())?.matmul(u)?;
    let lambdas = rho.spectrum().eigenvalues();
    let n = rho.dim();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((lambdas[i], lambdas[j], in_basis[(i, j)].norm_sqr()));
        }
    }
    Ok(out)
}

/// Spectral-sum path for I_{ρ,α,β}(H):
/// ½ Σ_{i<j} (λ_i + λ_j + f_{α+β} − f_α − f_β) |⟨φ_i|H_0|φ_j⟩|².
pub fn skew_i_spectral(rho: &DensityMatrix, h: &Observable, p: &SkewParams) -> Result<f64> {
    check_dims(rho, h)?;
    check_floor(rho, p)?;
    let mut sum = 0.0;
    for (li, lj, elem) in offdiag_elements(rho, h)? {
        let w = li + lj + f_weight_eig(li, lj, p.sum())
            - f_weight_eig(li, lj, p.alpha())
            - f_weight_eig(li, lj, p.beta());
        sum += w * elem;
    }
    Ok(0.5 * sum)
}

/// Spectral lower bound for J_{ρ,α,β}(H):
/// ½ Σ_{i<j} (λ_i + λ_j + f_{α+β} + f_α + f_β) |⟨φ_i|H_0|φ_j⟩|².
pub fn skew_j_spectral_bound(rho: &DensityMatrix, h: &Observable, p: &SkewParams) -> Result<f64> {
    check_dims(rho, h)?;
    check_floor(rho, p)?;
    let mut sum = 0.0;
    for (li, lj, elem) in offdiag_elements(rho, h)? {
        let w = li + lj + f_weight_eig(li, lj, p.sum())
            + f_weight_eig(li, lj, p.alpha())
            + f_weight_eig(li, lj, p.beta());
        sum += w * elem;
    }
    Ok(0.5 * sum)
}

/// One-parameter uncertainty quantity
/// U_{ρ,α}(H) = √(V² − (V − I_{ρ,α})²), which coincides with
/// √(I_{ρ,α} J_{ρ,α}).
pub fn u_luo(rho: &DensityMatrix, h: &Observable, alpha: f64) -> Result<f64> {
    let p = SkewParams::one_parameter(alpha)?;
    let v = variance(rho, h)?;
    let i = skew_i(rho, h, &p)?;
    let radicand = clamp_nonneg(v * v - (v - i) * (v - i));
    Ok(radicand.sqrt())
}

/// Geometric-mean uncertainty U_{ρ,α,β}(H) = √(I_{ρ,α,β} J_{ρ,α,β}).
pub fn u_geo(rho: &DensityMatrix, h: &Observable, p: &SkewParams) -> Result<f64> {
    let i = clamp_nonneg(skew_i(rho, h, p)?);
    let j = clamp_nonneg(skew_j(rho, h, p)?);
    Ok((i * j).sqrt())
}

/// Bundle of all quantities for one (ρ, H, α, β), with the dual-path
/// discrepancy on I.
#[derive(Clone, Debug)]
pub struct QuantityReport {
    pub variance: f64,
    pub skew_i: f64,
    pub skew_j: f64,
    pub skew_u: f64,
    pub dual_path_delta: f64,
    pub params: SkewParams,
}

pub fn report(rho: &DensityMatrix, h: &Observable, p: &SkewParams) -> Result<QuantityReport> {
    let v = variance(rho, h)?;
    let i = skew_i(rho, h, p)?;
    let j = skew_j(rho, h, p)?;
    let u = (clamp_nonneg(i) * clamp_nonneg(j)).sqrt();
    let i_spectral = skew_i_spectral(rho, h, p)?;
    Ok(QuantityReport {
        variance: v,
        skew_i: i,
        skew_j: j,
        skew_u: u,
        dual_path_delta: (i - i_spectral).abs(),
        params: *p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::states::{pauli, validate_density, Pauli, DEFAULT_EIGEN_FLOOR};

    const SQRT3: f64 = 1.7320508075688772;

    fn rho_fixture() -> DensityMatrix {
        validate_density(&ComplexMatrix::diagonal(&[0.75, 0.25]), DEFAULT_EIGEN_FLOOR).unwrap()
    }

    fn maximally_mixed() -> DensityMatrix {
        validate_density(&ComplexMatrix::diagonal(&[0.5, 0.5]), DEFAULT_EIGEN_FLOOR).unwrap()
    }

    fn params(a: f64, b: f64) -> SkewParams {
        SkewParams::new(a, b).unwrap()
    }

    #[test]
    fn region_classification() {
        assert_eq!(params(0.25, 0.25).region(), Region::LeHalf);
        assert_eq!(params(0.25, 0.75).region(), Region::GeOne);
        assert_eq!(params(0.3, 0.4).region(), Region::Gap);
        // Boundaries fall in the asserted regions.
        assert_eq!(params(0.5, 0.0).region(), Region::LeHalf);
        assert_eq!(params(0.5, 0.5).region(), Region::GeOne);
        assert!(SkewParams::new(-0.1, 0.5).is_err());
    }

    #[test]
    fn f_weight_examples() {
        assert!((f_weight(0.7, 0.7, 0.3).unwrap() - 1.4).abs() <= 1e-14);
        assert!((f_weight(0.75, 0.25, 0.5).unwrap() - SQRT3 / 2.0).abs() <= 1e-12);
        assert!((f_weight(0.75, 0.25, 0.25).unwrap() - 0.8988952674768176).abs() <= 1e-12);
        assert!(f_weight(0.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn f_weight_symmetries() {
        let a = f_weight(0.3, 0.9, 0.7).unwrap();
        assert!((a - f_weight(0.9, 0.3, 0.7).unwrap()).abs() <= 1e-14);
        assert!((a - f_weight(0.3, 0.9, 0.3).unwrap()).abs() <= 1e-14);
    }

    #[test]
    fn skew_i_fixture_values() {
        let rho = rho_fixture();
        let sx = pauli(Pauli::X);

        let wy = skew_i(&rho, &sx, &params(0.5, 0.5)).unwrap();
        assert!((wy - (1.0 - SQRT3 / 2.0)).abs() <= 1e-12);

        let quarter = skew_i(&rho, &sx, &params(0.25, 0.25)).unwrap();
        let f14 = f_weight(0.75, 0.25, 0.25).unwrap();
        assert!((quarter - 0.5 * (1.0 + SQRT3 / 2.0 - 2.0 * f14)).abs() <= 1e-12);

        let ones = skew_i(&rho, &sx, &params(1.0, 1.0)).unwrap();
        assert!((ones - 2.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn skew_i_vanishes_at_maximal_mixing() {
        let rho = maximally_mixed();
        for (a, b) in [(0.5, 0.5), (0.25, 0.25), (1.0, 0.7)] {
            let i = skew_i(&rho, &pauli(Pauli::X), &params(a, b)).unwrap();
            assert!(i.abs() <= 1e-12, "I = {i} at ({a}, {b})");
        }
    }

    #[test]
    fn spectral_path_matches_trace_path_on_fixtures() {
        let rho = rho_fixture();
        let sx = pauli(Pauli::X);
        for (a, b) in [(0.5, 0.5), (0.25, 0.25), (1.0, 1.0)] {
            let p = params(a, b);
            let t = skew_i(&rho, &sx, &p).unwrap();
            let s = skew_i_spectral(&rho, &sx, &p).unwrap();
            assert!((t - s).abs() <= 1e-10, "paths differ at ({a}, {b})");
        }
    }

    #[test]
    fn spectral_path_vanishes_for_commuting_pair() {
        let rho = rho_fixture();
        let s = skew_i_spectral(&rho, &pauli(Pauli::Z), &params(0.25, 0.25)).unwrap();
        assert!(s.abs() <= 1e-14);
        let mixed = maximally_mixed();
        let s = skew_i_spectral(&mixed, &pauli(Pauli::X), &params(0.3, 0.6)).unwrap();
        assert!(s.abs() <= 1e-14);
    }

    #[test]
    fn skew_j_fixture_values() {
        let rho = rho_fixture();
        let sx = pauli(Pauli::X);

        let half = skew_j(&rho, &sx, &params(0.5, 0.5)).unwrap();
        assert!((half - (1.0 + SQRT3 / 2.0)).abs() <= 1e-12);

        let quarter = skew_j(&rho, &sx, &params(0.25, 0.25)).unwrap();
        let f14 = f_weight(0.75, 0.25, 0.25).unwrap();
        assert!((quarter - 0.5 * (1.0 + SQRT3 / 2.0 + 2.0 * f14)).abs() <= 1e-12);

        let mixed = maximally_mixed();
        let j = skew_j(&mixed, &sx, &params(0.3, 0.6)).unwrap();
        assert!((j - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn skew_j_bound_examples() {
        let rho = rho_fixture();
        let p = params(0.5, 0.5);

        // H_0 = σ_x has zero diagonal in the eigenbasis, so the bound is
        // tight.
        let bound = skew_j_spectral_bound(&rho, &pauli(Pauli::X), &p).unwrap();
        assert!((bound - (1.0 + SQRT3 / 2.0)).abs() <= 1e-12);

        // Commuting pair: all off-diagonal elements vanish while J = 2V > 0.
        let bound_z = skew_j_spectral_bound(&rho, &pauli(Pauli::Z), &p).unwrap();
        let j_z = skew_j(&rho, &pauli(Pauli::Z), &p).unwrap();
        assert!(bound_z.abs() <= 1e-14 && j_z > 0.0);

        let mixed = maximally_mixed();
        let b = skew_j_spectral_bound(&mixed, &pauli(Pauli::X), &p).unwrap();
        assert!((b - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn u_luo_fixture_values() {
        let rho = rho_fixture();
        let sx = pauli(Pauli::X);
        assert!((u_luo(&rho, &sx, 0.5).unwrap() - 0.5).abs() <= 1e-12);
        // Commuting pair: I vanishes up to round-off, so U = O(√round-off).
        assert!(u_luo(&rho, &pauli(Pauli::Z), 0.3).unwrap().abs() <= 1e-7);

        let f14 = f_weight(0.75, 0.25, 0.25).unwrap();
        let expect = (1.0 - f14 * f14).sqrt();
        assert!((u_luo(&rho, &sx, 0.25).unwrap() - expect).abs() <= 1e-12);

        assert!(u_luo(&rho, &sx, 1.5).is_err());
    }

    #[test]
    fn u_geo_fixture_values() {
        let rho = rho_fixture();
        let sx = pauli(Pauli::X);
        assert!((u_geo(&rho, &sx, &params(0.25, 0.25)).unwrap() - 0.25).abs() <= 1e-10);
        assert!((u_geo(&rho, &sx, &params(1.0, 1.0)).unwrap() - 4.0 / 3.0).abs() <= 1e-10);
        // I itself is round-off (~1e-16), so U = √(IJ) is only O(1e-8).
        assert!(u_geo(&maximally_mixed(), &sx, &params(0.3, 0.6)).unwrap().abs() <= 1e-7);
    }

    #[test]
    fn report_fixture_values() {
        let rho = rho_fixture();
        let sx = pauli(Pauli::X);

        let r = report(&rho, &sx, &params(0.5, 0.5)).unwrap();
        assert!((r.variance - 1.0).abs() <= 1e-12);
        assert!((r.skew_i - 0.1339745962155614).abs() <= 1e-10);
        assert!((r.skew_j - 1.8660254037844386).abs() <= 1e-10);
        assert!((r.skew_u - 0.5).abs() <= 1e-10);
        assert!(r.dual_path_delta <= DUAL_PATH_TOL * r.skew_i.max(1.0));

        let mixed = maximally_mixed();
        let r = report(&mixed, &sx, &params(0.25, 0.25)).unwrap();
        assert!((r.variance - 1.0).abs() <= 1e-12);
        assert!(r.skew_i.abs() <= 1e-12);
        assert!((r.skew_j - 2.0).abs() <= 1e-12);
        // U = √(IJ) inherits the square root of I's round-off.
        assert!(r.skew_u.abs() <= 1e-7);

        let r = report(&rho, &sx, &params(1.0, 1.0)).unwrap();
        assert!((r.variance - 1.0).abs() <= 1e-12);
        assert!((r.skew_i - 2.0 / 3.0).abs() <= 1e-10);
        assert!((r.skew_j - 8.0 / 3.0).abs() <= 1e-10);
        assert!((r.skew_u - 4.0 / 3.0).abs() <= 1e-10);
    }

    #[test]
    fn floor_is_demanded_for_negative_powers() {
        let singular =
            validate_density(&ComplexMatrix::diagonal(&[1.0, 0.0]), 0.0).unwrap();
        let p = params(1.0, 0.5);
        assert!(matches!(
            skew_i(&singular, &pauli(Pauli::X), &p),
            Err(Error::BelowEigenFloor { .. })
        ));
        // α+β ≤ 1 stays fine on singular states.
        assert!(skew_i(&singular, &pauli(Pauli::X), &params(0.5, 0.5)).is_ok());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = rho_fixture();
        let h = Observable::new(ComplexMatrix::identity(3)).unwrap();
        assert!(matches!(
            skew_i(&rho, &h, &params(0.5, 0.5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
