//! Two-spectra inversion: weight formulas for the spectral measure, Jacobi
//! reconstruction from a discrete measure, and the solvers for the disjoint
//! and shared regimes.
//!
//! Each solver builds the measure masses from the pair (λ, μ) and one free
//! parameter ω, reads the perturbation parameters off the same data, and
//! reconstructs the matrix by orthonormalizing polynomials against the
//! measure on its own atom grid (a Lanczos run on diag(λ) started at √w,
//! with full reorthogonalization). Raw moment Gram-Schmidt is avoided: it
//! loses the problem beyond N ≈ 12, while the grid procedure is stable to N
//! in the hundreds.
//!
//! All eigenvalue-difference products are evaluated in sign/log-magnitude
//! form so clustered spectra cannot over- or underflow.

use thiserror::Error;

use crate::interlace::{InterlaceError, Regime, TwoSpectraProblem};
use crate::numeric::{ratio_product, ratio_product_skipping};
use crate::perturbation::{PerturbationError, PerturbationParams};
use crate::spectral::{DiscreteMeasure, JacobiMatrix, MatrixError, SpectralError};

/// Orthonormalization stops when a recurrence off-diagonal falls below
/// `BREAKDOWN_TOLERANCE · max(1, max|atom|)`.
pub const BREAKDOWN_TOLERANCE: f64 = 1e-13;

/// `|∏(ω−μ)/(ω−λ) − 1|` below this means the τ denominators degenerate;
/// cannot happen strictly inside the gap and signals tolerance misuse.
const DEGENERATE_PRODUCT_TOLERANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("omega = {omega} is not strictly inside the gap ({lo}, {hi})")]
    OmegaOutOfGap { omega: f64, lo: f64, hi: f64 },
    #[error("omega = {omega} violates the admissibility bound (threshold {bound})")]
    OmegaOutOfRange { omega: f64, bound: f64 },
    #[error("ratio product at omega degenerates; weight denominators vanish")]
    DegenerateProduct,
    #[error("division guard: {0}")]
    DivisionGuard(&'static str),
    #[error("a size-1 shared-gamma problem is underdetermined; rejected")]
    DegenerateShared,
    #[error("alpha = {alpha} is infeasible (solved theta^2 = {theta_squared})")]
    InfeasibleAlpha { alpha: f64, theta_squared: f64 },
    #[error("orthonormalization breakdown at step {step}: coefficient {value} (numerically confluent atoms)")]
    Breakdown { step: usize, value: f64 },
    #[error("gap ({lo}, {hi}) has an infinite endpoint; supply an explicit bracket")]
    UnboundedGap { lo: f64, hi: f64 },
    #[error("theta^2 = {theta_squared} is on the wrong side of the gap extremum {extremum}; no matrix attains it")]
    NoSolution { theta_squared: f64, extremum: f64 },
    #[error("root bracketing failed; tolerances are inconsistent with the data")]
    BracketingFailure,
    #[error(transparent)]
    Interlace(#[from] InterlaceError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Perturbation(#[from] PerturbationError),
}

/// A reconstructed matrix together with the perturbation parameters and the
/// measure masses that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseSolution {
    pub matrix: JacobiMatrix,
    pub params: PerturbationParams,
    pub weights: Vec<f64>,
}

fn require_shared(p: &TwoSpectraProblem) -> Result<f64, SolveError> {
    match p.regime() {
        Regime::SharedGamma => Ok(p.shared_value().expect("shared regime carries its value")),
        other => Err(InterlaceError::WrongRegime {
            required: "shared-gamma",
            actual: other,
        }
        .into()),
    }
}

/// `𝔪(γ) = ∏_{k≠k₀}(γ−μ_k)/(γ−λ_k)`, the quotient value at the shared
/// point with the common factor dropped. Greater than 1 exactly on θ > 1
/// data.
fn quotient_at_shared_value(p: &TwoSpectraProblem) -> Result<f64, SolveError> {
    let gamma = require_shared(p)?;
    Ok(ratio_product_skipping(gamma, p.mus(), p.lambdas(), p.k0()).value())
}

/// τ weights of the disjoint regime at a gap point ω: the masses of the
/// measure whose matrix reproduces both spectra with γ′ = ω.
pub fn tau_weights(p: &TwoSpectraProblem, omega: f64) -> Result<Vec<f64>, SolveError> {
    let (lo, hi) = p.gap_interval()?;
    if !omega.is_finite() || omega <= lo || omega >= hi {
        return Err(SolveError::OmegaOutOfGap { omega, lo, hi });
    }
    let l = p.lambdas();
    let m = p.mus();
    let q = ratio_product(omega, m, l).value();
    if !q.is_finite() {
        return Err(SolveError::DegenerateProduct);
    }
    let denominator = q - 1.0;
    if denominator.abs() <= DEGENERATE_PRODUCT_TOLERANCE * q.abs().max(1.0) {
        return Err(SolveError::DegenerateProduct);
    }
    let weights = (0..l.len())
        .map(|i| {
            ratio_product_skipping(l[i], m, l, i)
                .mul(m[i] - l[i])
                .div(l[i] - omega)
                .div(denominator)
                .value()
        })
        .collect();
    Ok(weights)
}

/// υ weights of the shared regime, parameterized by ω = θ′²; admissible
/// strictly above 𝔪(γ) on θ > 1 data and strictly below it on θ < 1 data.
pub fn upsilon_weights(p: &TwoSpectraProblem, omega: f64) -> Result<Vec<f64>, SolveError> {
    let gamma = require_shared(p)?;
    if p.len() < 2 {
        return Err(SolveError::DegenerateShared);
    }
    let mg = quotient_at_shared_value(p)?;
    let admissible = if mg > 1.0 { omega > mg } else { omega < mg };
    if !omega.is_finite() || !admissible {
        return Err(SolveError::OmegaOutOfRange { omega, bound: mg });
    }
    if omega == 1.0 {
        return Err(SolveError::DivisionGuard("omega = 1"));
    }
    let l = p.lambdas();
    let m = p.mus();
    let k0 = p.k0();
    let mut weights = vec![0.0; l.len()];
    for i in 0..l.len() {
        if i == k0 {
            continue;
        }
        weights[i] = ratio_product_skipping(l[i], m, l, i)
            .mul(m[i] - l[i])
            .div(l[i] - gamma)
            .div(omega - 1.0)
            .value();
    }
    weights[k0] = (omega - mg) / (omega - 1.0);
    Ok(weights)
}

/// ῦ weights of the shared regime, parameterized by ω = h′. The admissible
/// region is exactly where θ′² = γ/(ω+γ) is positive and on the same side
/// of 𝔪(γ) as the data orientation — equivalent to the sign-split bound
/// ω ≶ γ(1/𝔪(γ) − 1). Collapses for γ = 0, where no ω is admissible.
pub fn upsilon_tilde_weights(p: &TwoSpectraProblem, omega: f64) -> Result<Vec<f64>, SolveError> {
    let gamma = require_shared(p)?;
    if p.len() < 2 {
        return Err(SolveError::DegenerateShared);
    }
    if omega == 0.0 || !omega.is_finite() {
        return Err(SolveError::DivisionGuard("omega = 0"));
    }
    if omega + gamma == 0.0 {
        return Err(SolveError::DivisionGuard("omega = -gamma"));
    }
    let mg = quotient_at_shared_value(p)?;
    if gamma == 0.0 {
        return Err(SolveError::OmegaOutOfRange { omega, bound: 0.0 });
    }
    let theta_squared = gamma / (omega + gamma);
    let admissible = theta_squared > 0.0
        && if mg > 1.0 {
            theta_squared > mg
        } else {
            theta_squared < mg
        };
    if !admissible {
        return Err(SolveError::OmegaOutOfRange {
            omega,
            bound: gamma * (1.0 / mg - 1.0),
        });
    }
    let l = p.lambdas();
    let m = p.mus();
    let k0 = p.k0();
    let mut weights = vec![0.0; l.len()];
    for i in 0..l.len() {
        if i == k0 {
            continue;
        }
        weights[i] = ratio_product_skipping(l[i], m, l, i)
            .mul(m[i] - l[i])
            .mul(omega + gamma)
            .div(gamma - l[i])
            .div(omega)
            .value();
    }
    weights[k0] = (omega + gamma) / omega * mg - gamma / omega;
    Ok(weights)
}

/// Three-term recurrence coefficients of the orthonormal polynomials of the
/// measure, i.e. the unique Jacobi matrix whose eigendecomposition
/// reproduces (atoms, masses). Implemented as a Lanczos run on diag(atoms)
/// with start vector √masses and full (two-pass) reorthogonalization.
pub fn reconstruct_jacobi(measure: &DiscreteMeasure) -> Result<JacobiMatrix, SolveError> {
    let x = measure.atoms();
    let w = measure.masses();
    let n = x.len();
    let scale = x.iter().fold(1.0f64, |acc, &v| acc.max(v.abs()));

    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(p, q)| p * q).sum() };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    basis.push(w.iter().map(|&wi| wi.sqrt()).collect());
    let mut q = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n.saturating_sub(1));

    for j in 0..n {
        let v = &basis[j];
        let mut u: Vec<f64> = v.iter().zip(x).map(|(&vi, &xi)| xi * vi).collect();
        let a = dot(&u, v);
        q.push(a);
        if j + 1 == n {
            break;
        }
        for (ui, vi) in u.iter_mut().zip(v) {
            *ui -= a * vi;
        }
        if j > 0 {
            let bj = b[j - 1];
            for (ui, pi) in u.iter_mut().zip(&basis[j - 1]) {
                *ui -= bj * pi;
            }
        }
        for _ in 0..2 {
            for prev in &basis {
                let c = dot(&u, prev);
                for (ui, pi) in u.iter_mut().zip(prev) {
                    *ui -= c * pi;
                }
            }
        }
        let norm = dot(&u, &u).sqrt();
        if norm <= BREAKDOWN_TOLERANCE * scale {
            return Err(SolveError::Breakdown {
                step: j + 1,
                value: norm,
            });
        }
        b.push(norm);
        basis.push(u.into_iter().map(|ui| ui / norm).collect());
    }

    Ok(JacobiMatrix::new(q, b)?)
}

fn solution_from_weights(
    p: &TwoSpectraProblem,
    theta: f64,
    h: f64,
    weights: Vec<f64>,
) -> Result<InverseSolution, SolveError> {
    let measure = DiscreteMeasure::new(p.lambdas().to_vec(), weights.clone())?;
    let matrix = reconstruct_jacobi(&measure)?;
    let params = PerturbationParams::new(theta, h)?;
    Ok(InverseSolution {
        matrix,
        params,
        weights,
    })
}

/// Disjoint solver: θ′ = √(∏(ω−μ)/(ω−λ)), h′ = ω(1−θ′²)/θ′², so that
/// γ′ = ω; the matrix comes from the τ masses on the λ atoms.
pub fn solve_disjoint(p: &TwoSpectraProblem, omega: f64) -> Result<InverseSolution, SolveError> {
    let weights = tau_weights(p, omega)?;
    let q = ratio_product(omega, p.mus(), p.lambdas()).value();
    if !(q.is_finite() && q > 0.0) {
        return Err(SolveError::DegenerateProduct);
    }
    let theta = q.sqrt();
    let h = omega * (1.0 - q) / q;
    solution_from_weights(p, theta, h, weights)
}

/// Shared solver in the ratio-of-masses parameterization: θ′ = √ω,
/// h′ = γ(1/ω − 1).
pub fn solve_shared_by_theta(
    p: &TwoSpectraProblem,
    omega: f64,
) -> Result<InverseSolution, SolveError> {
    let gamma = require_shared(p)?;
    let weights = upsilon_weights(p, omega)?;
    if omega <= 0.0 {
        return Err(SolveError::OmegaOutOfRange { omega, bound: 0.0 });
    }
    let theta = omega.sqrt();
    let h = gamma * (1.0 / omega - 1.0);
    solution_from_weights(p, theta, h, weights)
}

/// Shared solver in the spring parameterization: θ′ = √(γ/(ω+γ)), h′ = ω.
pub fn solve_shared_by_h(p: &TwoSpectraProblem, omega: f64) -> Result<InverseSolution, SolveError> {
    let gamma = require_shared(p)?;
    let weights = upsilon_tilde_weights(p, omega)?;
    let theta = (gamma / (omega + gamma)).sqrt();
    solution_from_weights(p, theta, omega, weights)
}

/// Shared solver keyed on the normalizing constant α at γ: solves
/// `𝔪(γ) = θ² − α⁻¹(θ²−1)` for θ² and delegates to the θ-parameterization.
pub fn solve_shared_by_alpha(
    p: &TwoSpectraProblem,
    alpha: f64,
) -> Result<InverseSolution, SolveError> {
    require_shared(p)?;
    if p.len() < 2 {
        return Err(SolveError::DegenerateShared);
    }
    if !(alpha.is_finite() && alpha > 1.0) {
        return Err(SolveError::InfeasibleAlpha {
            alpha,
            theta_squared: f64::NAN,
        });
    }
    let mg = quotient_at_shared_value(p)?;
    let inv_alpha = 1.0 / alpha;
    let theta_squared = (mg - inv_alpha) / (1.0 - inv_alpha);
    if !theta_squared.is_finite() || theta_squared <= 0.0 || (theta_squared - 1.0).abs() < 1e-12 {
        return Err(SolveError::InfeasibleAlpha {
            alpha,
            theta_squared,
        });
    }
    solve_shared_by_theta(p, theta_squared)
}
