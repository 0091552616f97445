//! The two-parameter corner perturbation: scale the first mass by θ⁻² and
//! shift the first spring by −h·m₁, which on the matrix side replaces the
//! corner `q₁ → θ²(q₁+h)` and the first coupling `b₁ → θ·b₁`.
//!
//! For θ ≠ 1 the constant `γ = θ²h/(1−θ²)` is the only point where the
//! perturbed and unperturbed spectra can meet, and the quotient
//! `𝔪(z) = m(z)/m̃(z) = (θ²−1)(z−γ)m(z) + θ²` carries the whole inverse
//! theory. θ = 1 is the plain rank-one shift; γ has no limit there and every
//! γ-dependent operation refuses it.

use num_complex::Complex64;
use thiserror::Error;

use crate::spectral::{pole_hit, JacobiMatrix, SpectralError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PerturbationError {
    #[error("theta must be strictly positive and finite (got {0})")]
    InvalidTheta(f64),
    #[error("h must be finite (got {0})")]
    InvalidH(f64),
    #[error("gamma = theta^2 h / (1 - theta^2) is undefined at theta = 1")]
    ThetaOne,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// Mass ratio θ > 0 and spring shift h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationParams {
    theta: f64,
    h: f64,
}

impl PerturbationParams {
    pub fn new(theta: f64, h: f64) -> Result<Self, PerturbationError> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(PerturbationError::InvalidTheta(theta));
        }
        if !h.is_finite() {
            return Err(PerturbationError::InvalidH(h));
        }
        Ok(PerturbationParams { theta, h })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn is_rank_one(&self) -> bool {
        self.theta == 1.0
    }

    /// `γ = θ²h/(1−θ²)`; undefined at θ = 1.
    pub fn gamma(&self) -> Result<f64, PerturbationError> {
        gamma_of(self.theta, self.h)
    }
}

/// `γ = θ²h/(1−θ²)` for θ ≠ 1.
pub fn gamma_of(theta: f64, h: f64) -> Result<f64, PerturbationError> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(PerturbationError::InvalidTheta(theta));
    }
    if theta == 1.0 {
        return Err(PerturbationError::ThetaOne);
    }
    Ok(theta * theta * h / (1.0 - theta * theta))
}

/// Corner-perturbed matrix: `q̃₁ = θ²(q₁+h)`, `b̃₁ = θ·b₁`, all else equal.
pub fn apply_perturbation(j: &JacobiMatrix, p: &PerturbationParams) -> JacobiMatrix {
    let mut q = j.diagonal().to_vec();
    let mut b = j.off_diagonal().to_vec();
    q[0] = p.theta * p.theta * (q[0] + p.h);
    if let Some(first) = b.first_mut() {
        *first *= p.theta;
    }
    JacobiMatrix::new(q, b).expect("theta > 0 preserves validity")
}

/// `𝔪(z) = (θ²−1)(z−γ)m(z) + θ²`, the quotient of the unperturbed and
/// perturbed m-functions. When `z` sits on an eigenvalue that coincides with
/// γ the pole is removable and the value is `θ² − (θ²−1)·w` with `w` the
/// weight at γ; any other eigenvalue hit is an error.
pub fn m_quotient(
    j: &JacobiMatrix,
    p: &PerturbationParams,
    z: Complex64,
) -> Result<Complex64, PerturbationError> {
    let gamma = p.gamma()?;
    let t2 = p.theta * p.theta;
    let s = j.eigendecompose()?;

    if let Some((k, &eigenvalue)) = s
        .eigenvalues()
        .iter()
        .enumerate()
        .find(|(_, &l)| pole_hit(z, l))
    {
        if pole_hit(z, gamma) {
            return Ok(Complex64::new(t2 - (t2 - 1.0) * s.weights()[k], 0.0));
        }
        return Err(SpectralError::PoleEvaluation { eigenvalue }.into());
    }

    let m = s.weyl_m(z)?;
    Ok((t2 - 1.0) * (z - gamma) * m + t2)
}

/// `|Σμ_k − Σλ_k − (q₁(θ²−1) + θ²h)|`: the eigenvalue-shift sum against the
/// exact finite trace of the corner perturbation. Sums are taken over the
/// computed spectra, not the matrix traces, so this really exercises the
/// eigensolver.
pub fn shift_sum_residual(
    j: &JacobiMatrix,
    p: &PerturbationParams,
) -> Result<f64, PerturbationError> {
    let lambda_sum: f64 = j.eigendecompose()?.eigenvalues().iter().sum();
    let mu_sum: f64 = apply_perturbation(j, p)
        .eigendecompose()?
        .eigenvalues()
        .iter()
        .sum();
    let t2 = p.theta * p.theta;
    let expected = j.diagonal()[0] * (t2 - 1.0) + t2 * p.h;
    Ok((mu_sum - lambda_sum - expected).abs())
}
