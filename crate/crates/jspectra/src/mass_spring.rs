//! Conversion between physical chains and Jacobi matrices.
//!
//! A chain of N masses, fixed to a wall through the first spring and free on
//! the right, maps to the matrix entries `q_j = −(k_{j+1}+k_j)/m_j` and
//! `b_j = k_{j+1}/√(m_j m_{j+1})`, with the free-end convention `k_{N+1} = 0`
//! closing the last row. The inverse direction needs the two seeds m₁ and k₁:
//! the corner `q₁` only fixes the sum k₁+k₂, so one seed alone leaves the
//! chain undetermined.

use thiserror::Error;

use crate::perturbation::PerturbationParams;
use crate::spectral::{JacobiMatrix, MatrixError};

const FREE_END_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MassSpringError {
    #[error("masses and springs must have the same non-zero length")]
    BadShape,
    #[error("all masses and spring constants must be strictly positive and finite")]
    NotPositive,
    #[error("seed {name} must be strictly positive and finite (got {value})")]
    BadSeed { name: &'static str, value: f64 },
    #[error("recursion produced a non-physical {name}[{index}] = {value}")]
    Nonphysical {
        name: &'static str,
        index: usize,
        value: f64,
    },
    #[error("matrix is not a free-ended chain for these seeds: q_N = {q_last} but -k_N/m_N = {expected}")]
    InconsistentFreeEnd { q_last: f64, expected: f64 },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Masses m₁..m_N and spring constants k₁..k_N; k₁ couples to the wall, the
/// right end is free.
#[derive(Debug, Clone, PartialEq)]
pub struct MassSpringSystem {
    masses: Vec<f64>,
    springs: Vec<f64>,
}

impl MassSpringSystem {
    pub fn new(masses: Vec<f64>, springs: Vec<f64>) -> Result<Self, MassSpringError> {
        if masses.is_empty() || masses.len() != springs.len() {
            return Err(MassSpringError::BadShape);
        }
        if masses
            .iter()
            .chain(springs.iter())
            .any(|&x| !(x.is_finite() && x > 0.0))
        {
            return Err(MassSpringError::NotPositive);
        }
        Ok(MassSpringSystem { masses, springs })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn springs(&self) -> &[f64] {
        &self.springs
    }
}

/// Chain to matrix, with `k_{N+1} = 0` at the free end.
pub fn to_jacobi(s: &MassSpringSystem) -> JacobiMatrix {
    let n = s.len();
    let m = s.masses();
    let k = s.springs();
    let mut q = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n.saturating_sub(1));
    for j in 0..n {
        let k_next = if j + 1 < n { k[j + 1] } else { 0.0 };
        q.push(-(k_next + k[j]) / m[j]);
        if j + 1 < n {
            b.push(k[j + 1] / (m[j] * m[j + 1]).sqrt());
        }
    }
    JacobiMatrix::new(q, b).expect("positive chain data yields a valid matrix")
}

/// Matrix to chain, given the seeds m₁ and k₁. Runs the recursion
/// `k_{j+1} = −q_j m_j − k_j`, `m_{j+1} = k_{j+1}²/(b_j² m_j)` and then
/// checks the free-end row `q_N = −k_N/m_N`.
pub fn from_jacobi(
    j: &JacobiMatrix,
    m1: f64,
    k1: f64,
) -> Result<MassSpringSystem, MassSpringError> {
    if !(m1.is_finite() && m1 > 0.0) {
        return Err(MassSpringError::BadSeed {
            name: "m1",
            value: m1,
        });
    }
    if !(k1.is_finite() && k1 > 0.0) {
        return Err(MassSpringError::BadSeed {
            name: "k1",
            value: k1,
        });
    }
    let n = j.dim();
    let q = j.diagonal();
    let b = j.off_diagonal();
    let mut masses = vec![m1];
    let mut springs = vec![k1];
    for idx in 0..n - 1 {
        let k_next = -q[idx] * masses[idx] - springs[idx];
        if !(k_next.is_finite() && k_next > 0.0) {
            return Err(MassSpringError::Nonphysical {
                name: "k",
                index: idx + 1,
                value: k_next,
            });
        }
        let m_next = k_next * k_next / (b[idx] * b[idx] * masses[idx]);
        if !(m_next.is_finite() && m_next > 0.0) {
            return Err(MassSpringError::Nonphysical {
                name: "m",
                index: idx + 1,
                value: m_next,
            });
        }
        springs.push(k_next);
        masses.push(m_next);
    }
    let expected = -springs[n - 1] / masses[n - 1];
    let q_last = q[n - 1];
    if (q_last - expected).abs() > FREE_END_TOLERANCE * q_last.abs().max(1.0) {
        return Err(MassSpringError::InconsistentFreeEnd { q_last, expected });
    }
    MassSpringSystem::new(masses, springs)
}

/// The physical reading of (θ, h) on the first cell: the mass change
/// `Δm = m₁(θ⁻²−1)` and the spring change `Δk = −h·m₁`.
pub fn physical_delta(p: &PerturbationParams, m1: f64) -> (f64, f64) {
    let theta = p.theta();
    (m1 * (1.0 / (theta * theta) - 1.0), -p.h() * m1)
}
