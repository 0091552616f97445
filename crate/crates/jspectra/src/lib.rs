//! Forward and inverse spectral analysis of finite Jacobi matrices modeling
//! mass-spring chains under a first-mass/first-spring perturbation.
//!
//! The perturbation scales the first mass by θ⁻² and shifts the first spring
//! by −h·m₁, which replaces the matrix corner `q₁ → θ²(q₁+h)` and the first
//! coupling `b₁ → θ·b₁` while leaving the rest untouched. This crate
//! implements both directions of the resulting two-spectra theory on N×N
//! truncations, where every identity is an exact rational relation:
//!
//! - [`spectral`]: Jacobi matrices, eigendecompositions with spectral-measure
//!   weights, truncation, the Weyl m-function and its Riccati self-check;
//! - [`perturbation`]: the perturbed matrix, the constant γ = θ²h/(1−θ²),
//!   the quotient 𝔪 = m/m̃ and the eigenvalue-shift trace identity;
//! - [`interlace`]: enumeration of a spectra pair, the distinguished gap
//!   index k₀ and the regime (θ ≷ 1, shared point or not);
//! - [`inverse`]: measure weights from two spectra plus one parameter,
//!   reconstruction by orthonormal-polynomial recurrence, and the disjoint/
//!   shared solvers recovering (q, b, θ, h);
//! - [`isospectral`]: the one-parameter family of distinct matrices sharing
//!   both spectra, the gap extremum of 𝔪, and the exactly-two-solutions
//!   structure at fixed θ;
//! - [`mass_spring`]: conversions between chains (masses, springs) and
//!   matrices, and the physical (Δm, Δk) reading of (θ, h).
//!
//! Batch operations fan out with rayon when the default `parallel` feature
//! is on; disabling it yields a dependency-free sequential build with the
//! same API.
//!
//! # Example
//!
//! Forward problem and recovery from the two spectra:
//!
//! ```
//! use jspectra::{
//!     apply_perturbation, classify, solve_disjoint, JacobiMatrix, PerturbationParams,
//! };
//!
//! let j = JacobiMatrix::new(vec![0.0, 0.0], vec![1.0])?;
//! let p = PerturbationParams::new(2.0, 0.0)?;
//!
//! let lambdas = j.eigendecompose()?.eigenvalues().to_vec();   // {-1, 1}
//! let mus = apply_perturbation(&j, &p).eigendecompose()?.eigenvalues().to_vec(); // {-2, 2}
//!
//! // The pair classifies with its distinguished gap (-1, 1); solving at
//! // the generating gamma = 0 recovers the matrix and the parameters.
//! let problem = classify(&lambdas, &mus)?;
//! let solution = solve_disjoint(&problem, p.gamma()?)?;
//! assert!((solution.params.theta() - 2.0).abs() < 1e-12);
//! assert!(solution.matrix.diagonal().iter().all(|q| q.abs() < 1e-12));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod interlace;
pub mod inverse;
pub mod isospectral;
pub mod mass_spring;
pub mod par;
pub mod perturbation;
pub mod spectral;

mod eigen;
mod numeric;

pub use num_complex::Complex64;

pub use interlace::{classify, classify_readings, InterlaceError, Regime, TwoSpectraProblem};
pub use inverse::{
    reconstruct_jacobi, solve_disjoint, solve_shared_by_alpha, solve_shared_by_h,
    solve_shared_by_theta, tau_weights, upsilon_tilde_weights, upsilon_weights, InverseSolution,
    SolveError,
};
pub use isospectral::{
    family, gap_extremum, gap_extremum_in, quotient_from_spectra, quotient_from_spectra_real,
    solve_with_known_theta, FamilyMember,
};
pub use mass_spring::{from_jacobi, physical_delta, to_jacobi, MassSpringError, MassSpringSystem};
pub use perturbation::{
    apply_perturbation, gamma_of, m_quotient, shift_sum_residual, PerturbationError,
    PerturbationParams,
};
pub use spectral::{
    riccati_residual, DiscreteMeasure, JacobiMatrix, MatrixError, SpectralData, SpectralError,
};
