//! Verdict-producing checkers: one per inequality or scalar identity, each
//! returning lhs/rhs/slack and a tolerance-gated `holds` flag.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{commutator, trace_product};
use crate::skew::{f_weight, skew_i, skew_j, u_geo, u_luo, SkewParams};
use crate::states::{center, covariance, variance, DensityMatrix, Observable};

/// Default verdict tolerance: holds ⇔ slack ≥ −tol·max(1, |lhs|, |rhs|).
/// Chosen so exact-equality cases sit inside the pass band.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Stricter tolerance used by the scalar f(t) ≥ 0 verdict.
pub const SCALAR_F_TOL: f64 = 1e-12;

/// Outcome of one inequality evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    pub tol: f64,
}

impl InequalityVerdict {
    /// Builds a verdict for lhs ≥ rhs under the stated tolerance rule.
    pub fn evaluate(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let slack = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        InequalityVerdict {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            holds: slack >= -tol * scale,
            tol,
        }
    }

    pub fn scale(&self) -> f64 {
        self.lhs.abs().max(self.rhs.abs()).max(1.0)
    }

    /// Same verdict under a different tolerance.
    pub fn retolerated(&self, tol: f64) -> Self {
        InequalityVerdict::evaluate(&self.name, self.lhs, self.rhs, tol)
    }
}

/// |Tr[ρ[A,B]]|² via the direct trace.
pub fn commutator_trace_sq(rho: &DensityMatrix, a: &Observable, b: &Observable) -> Result<f64> {
    let c = commutator(a.matrix(), b.matrix())?;
    Ok(trace_product(&[rho.matrix(), &c])?.norm_sqr())
}

/// |Tr[ρ[A,B]]| through the spectral route:
/// 2 |Σ_{i<j} (λ_i − λ_j) Im⟨φ_i|A_0|φ_j⟩⟨φ_j|B_0|φ_i⟩|.
pub fn commutator_trace_spectral(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<f64> {
    let a0 = center(rho, a)?;
    let b0 = center(rho, b)?;
    let u = rho.spectrum().eigenvectors();
    let a_basis = u.adjoint().matmul(a0.matrix())?.matmul(u)?;
    let b_basis = u.adjoint().matmul(b0.matrix())?.matmul(u)?;
    let lambdas = rho.spectrum().eigenvalues();
    let n = rho.dim();
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += (lambdas[i] - lambdas[j]) * (a_basis[(i, j)] * b_basis[(j, i)]).im;
        }
    }
    Ok(2.0 * sum.abs())
}

/// Heisenberg: V(A)V(B) ≥ ¼|Tr[ρ[A,B]]|².
pub fn check_heisenberg(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<InequalityVerdict> {
    let lhs = variance(rho, a)? * variance(rho, b)?;
    let rhs = 0.25 * commutator_trace_sq(rho, a, b)?;
    Ok(InequalityVerdict::evaluate("heisenberg", lhs, rhs, DEFAULT_TOL))
}

/// Schrödinger refinement: V(A)V(B) − |Cov(A,B)|² ≥ ¼|Tr[ρ[A,B]]|².
pub fn check_schrodinger(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<InequalityVerdict> {
    let cov = covariance(rho, a, b)?;
    let lhs = variance(rho, a)? * variance(rho, b)? - cov.norm_sqr();
    let rhs = 0.25 * commutator_trace_sq(rho, a, b)?;
    Ok(InequalityVerdict::evaluate("schrodinger", lhs, rhs, DEFAULT_TOL))
}

/// U(A)U(B) ≥ ¼|Tr[ρ[A,B]]|² with the α = 1/2 uncertainty quantity.
pub fn check_luo(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<InequalityVerdict> {
    let lhs = u_luo(rho, a, 0.5)? * u_luo(rho, b, 0.5)?;
    let rhs = 0.25 * commutator_trace_sq(rho, a, b)?;
    Ok(InequalityVerdict::evaluate("luo", lhs, rhs, DEFAULT_TOL))
}

/// One-parameter relation: U_α(A)U_α(B) ≥ α(1−α)|Tr[ρ[A,B]]|².
pub fn check_thm21(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
    alpha: f64,
) -> Result<InequalityVerdict> {
    let lhs = u_luo(rho, a, alpha)? * u_luo(rho, b, alpha)?;
    let rhs = alpha * (1.0 - alpha) * commutator_trace_sq(rho, a, b)?;
    Ok(InequalityVerdict::evaluate("thm21", lhs, rhs, DEFAULT_TOL))
}

/// Two-parameter relation: U_{α,β}(A)U_{α,β}(B) ≥ αβ|Tr[ρ[A,B]]|².
/// Asserted only for α+β ≤ 1/2 or α+β ≥ 1; callers decide what to do with
/// gap-region verdicts.
pub fn check_thm31(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
    p: &SkewParams,
) -> Result<InequalityVerdict> {
    let lhs = u_geo(rho, a, p)? * u_geo(rho, b, p)?;
    let rhs = p.alpha() * p.beta() * commutator_trace_sq(rho, a, b)?;
    Ok(InequalityVerdict::evaluate("thm31", lhs, rhs, DEFAULT_TOL))
}

/// The known-false candidate I(A)I(B) ≥ ¼|Tr[ρ[A,B]]|². Violations are the
/// expected outcome on suitable inputs.
pub fn check_wy_naive(
    rho: &DensityMatrix,
    a: &Observable,
    b: &Observable,
) -> Result<InequalityVerdict> {
    let half = SkewParams::new(0.5, 0.5)?;
    let lhs = skew_i(rho, a, &half)? * skew_i(rho, b, &half)?;
    let rhs = 0.25 * commutator_trace_sq(rho, a, b)?;
    Ok(InequalityVerdict::evaluate("wy_naive", lhs, rhs, DEFAULT_TOL))
}

/// Every pairwise link of the ordering chains
/// 0 ≤ I ≤ U ≤ V, I_α ≤ I ≤ J ≤ J_α, 0 ≤ I_α ≤ U_α ≤ U,
/// plus the trace comparison Tr[ρ^{1/2}Hρ^{1/2}H] ≤ Tr[ρ^αHρ^{1−α}H].
pub fn check_chain(
    rho: &DensityMatrix,
    h: &Observable,
    alpha: f64,
) -> Result<Vec<InequalityVerdict>> {
    let p_alpha = SkewParams::one_parameter(alpha)?;
    let p_half = SkewParams::new(0.5, 0.5)?;

    let v = variance(rho, h)?;
    let i_wy = skew_i(rho, h, &p_half)?;
    let j_wy = skew_j(rho, h, &p_half)?;
    let u_wy = u_luo(rho, h, 0.5)?;
    let i_a = skew_i(rho, h, &p_alpha)?;
    let j_a = skew_j(rho, h, &p_alpha)?;
    let u_a = u_luo(rho, h, alpha)?;

    let tr_half = cross_trace(rho, h, 0.5)?;
    let tr_alpha = cross_trace(rho, h, alpha)?;

    let t = DEFAULT_TOL;
    Ok(vec![
        InequalityVerdict::evaluate("chain24_I_nonneg", i_wy, 0.0, t),
        InequalityVerdict::evaluate("chain24_I_le_U", u_wy, i_wy, t),
        InequalityVerdict::evaluate("chain24_U_le_V", v, u_wy, t),
        InequalityVerdict::evaluate("chain27_Ia_le_I", i_wy, i_a, t),
        InequalityVerdict::evaluate("chain27_I_le_J", j_wy, i_wy, t),
        InequalityVerdict::evaluate("chain27_J_le_Ja", j_a, j_wy, t),
        InequalityVerdict::evaluate("chain29_Ia_nonneg", i_a, 0.0, t),
        InequalityVerdict::evaluate("chain29_Ia_le_Ua", u_a, i_a, t),
        InequalityVerdict::evaluate("chain29_Ua_le_U", u_wy, u_a, t),
        InequalityVerdict::evaluate("trace_power_comparison", tr_alpha, tr_half, t),
    ])
}

// Tr[ρ^a H ρ^{1−a} H] on the raw (uncentered) observable.
fn cross_trace(rho: &DensityMatrix, h: &Observable, a: f64) -> Result<f64> {
    let left = rho.power(a)?;
    let right = rho.power(1.0 - a)?;
    Ok(trace_product(&[&left, h.matrix(), &right, h.matrix()])?.re)
}

/// Scalar inequality behind the two-parameter relation:
/// (t^{1−α−β}+1)²(t^{2α}−1)(t^{2β}−1) ≥ 16αβ(t−1)².
pub fn scalar_lemma33(t: f64, alpha: f64, beta: f64) -> Result<InequalityVerdict> {
    if t <= 0.0 {
        return Err(Error::InvalidParam(format!("t must be positive, got {t}")));
    }
    let p = SkewParams::new(alpha, beta)?;
    let k = p.sum();
    let lhs = (t.powf(1.0 - k) + 1.0).powi(2) * (t.powf(2.0 * alpha) - 1.0)
        * (t.powf(2.0 * beta) - 1.0);
    let rhs = 16.0 * alpha * beta * (t - 1.0).powi(2);
    Ok(InequalityVerdict::evaluate("lemma33", lhs, rhs, DEFAULT_TOL))
}

/// Residual of the factorization identity
/// (t^{1−α−β}+1)²(t^{2α}−1)(t^{2β}−1)
/// = (t+1+t^{α+β}+t^{1−α−β})² − (t^α+t^{1−α}+t^β+t^{1−β})²,
/// normalized by the largest of 1 and the three squared terms.
pub fn scalar_factorization(t: f64, alpha: f64, beta: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::InvalidParam(format!("t must be positive, got {t}")));
    }
    let p = SkewParams::new(alpha, beta)?;
    let k = p.sum();
    let product = (t.powf(1.0 - k) + 1.0).powi(2) * (t.powf(2.0 * alpha) - 1.0)
        * (t.powf(2.0 * beta) - 1.0);
    let plus_sq = (t + 1.0 + t.powf(k) + t.powf(1.0 - k)).powi(2);
    let minus_sq =
        (t.powf(alpha) + t.powf(1.0 - alpha) + t.powf(beta) + t.powf(1.0 - beta)).powi(2);
    // Normalize by the squares themselves: near αβ = 0 they cancel exactly,
    // so the difference alone would understate the working magnitude.
    let scale = product.abs().max(plus_sq).max(minus_sq).max(1.0);
    Ok((product - (plus_sq - minus_sq)).abs() / scale)
}

/// f(t) = (t^{1−k}+1)(t^k−1) − 2k(t−1) with its nonnegativity verdict, which
/// is only asserted for k ≥ 1 or k ≤ 1/2.
pub fn scalar_f(t: f64, k: f64) -> Result<(f64, InequalityVerdict)> {
    if t < 1.0 {
        return Err(Error::InvalidParam(format!("t must be at least 1, got {t}")));
    }
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::InvalidParam(format!("k must be nonnegative, got {k}")));
    }
    let value = (t.powf(1.0 - k) + 1.0) * (t.powf(k) - 1.0) - 2.0 * k * (t - 1.0);
    let verdict = InequalityVerdict::evaluate("scalar_f", value, 0.0, SCALAR_F_TOL);
    Ok((value, verdict))
}

/// The one-parameter scalar fact: (1−2p)²(s−1)² ≥ (s^p − s^{1−p})²
/// for p ∈ [0, 1] and s ≥ 1.
pub fn scalar_prior(p: f64, s: f64) -> Result<InequalityVerdict> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!("p must lie in [0, 1], got {p}")));
    }
    if s < 1.0 {
        return Err(Error::InvalidParam(format!("s must be at least 1, got {s}")));
    }
    let lhs = (1.0 - 2.0 * p).powi(2) * (s - 1.0).powi(2);
    let rhs = (s.powf(p) - s.powf(1.0 - p)).powi(2);
    Ok(InequalityVerdict::evaluate("prior", lhs, rhs, DEFAULT_TOL))
}

/// Scalar probe point for the lemma-level checks.
#[derive(Clone, Copy, Debug)]
pub struct ScalarProbe {
    pub t: f64,
    pub p: f64,
    pub s: f64,
    pub k: f64,
}

impl ScalarProbe {
    pub fn new(t: f64, p: f64, s: f64, k: f64) -> Result<Self> {
        if t <= 0.0 || !(0.0..=1.0).contains(&p) || s < 1.0 || k < 0.0 {
            return Err(Error::InvalidParam(format!(
                "scalar probe out of range: t={t}, p={p}, s={s}, k={k}"
            )));
        }
        Ok(ScalarProbe { t, p, s, k })
    }
}

/// Eigenvalue-pair form of the weight inequality behind the two-parameter
/// relation: returns (lhs, rhs) of
/// (λ_i+λ_j+f_{α+β})² − (f_α+f_β)² ≥ 16αβ(λ_i−λ_j)².
pub fn weight_difference_bound(li: f64, lj: f64, p: &SkewParams) -> Result<(f64, f64)> {
    let fk = f_weight(li, lj, p.sum())?;
    let fa = f_weight(li, lj, p.alpha())?;
    let fb = f_weight(li, lj, p.beta())?;
    let lhs = (li + lj + fk).powi(2) - (fa + fb).powi(2);
    let rhs = 16.0 * p.alpha() * p.beta() * (li - lj).powi(2);
    Ok((lhs, rhs))
}
