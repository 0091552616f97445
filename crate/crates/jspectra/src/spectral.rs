//! Finite Jacobi matrices, their spectral decompositions, and the associated
//! Weyl m-function.
//!
//! A Jacobi matrix here is a real symmetric tridiagonal matrix with strictly
//! positive off-diagonal entries. Its spectrum is simple, every eigenvector
//! has a nonzero first component, and the pair (eigenvalues, squared first
//! components) is a probability measure on the line that determines the
//! matrix uniquely. `m(z) = Σ w_k/(λ_k − z)` is the (1,1) resolvent entry;
//! its zeros are the eigenvalues of the matrix with the first row and column
//! removed, and `b₁² m_T(z) = q₁ − z − 1/m(z)` ties the two together.

use num_complex::Complex64;
use thiserror::Error;

use crate::eigen;

/// Scale-aware pole detection: `z` counts as hitting the eigenvalue `λ` when
/// `|z − λ| ≤ POLE_TOLERANCE · max(1, |λ|)`.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// `1/m(z)` is refused when `|m(z)|` falls below this, i.e. when `z` sits on
/// a zero of the m-function.
pub(crate) const ZERO_M_TOLERANCE: f64 = 1e-13;

/// Slack allowed on `Σ weights = 1` when validating externally supplied data.
const WEIGHT_SUM_TOLERANCE: f64 = 1e-8;

/// Spectral weights are squared eigenvector components; below the square of
/// the rotation noise floor they carry no information and may round to
/// zero, so they are clamped here to stay positive.
const WEIGHT_NOISE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("diagonal needs exactly one more entry than the off-diagonal (got {diag} and {off})")]
    LengthMismatch { diag: usize, off: usize },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("off-diagonal entry b[{index}] = {value} must be strictly positive")]
    NonPositiveOffDiagonal { index: usize, value: f64 },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("cannot truncate a 1x1 matrix: nothing remains")]
    TooSmall,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("QL iteration did not converge within {limit} sweeps")]
    IterationFailure { limit: usize },
    #[error("evaluation point is within pole tolerance of the eigenvalue {eigenvalue}")]
    PoleEvaluation { eigenvalue: f64 },
    #[error("|m(z)| is below tolerance; z is too close to a zero of m")]
    ZeroM,
    #[error("invalid spectral data: {0}")]
    InvalidData(String),
}

/// Real symmetric tridiagonal matrix with positive off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    q: Vec<f64>,
    b: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(q: Vec<f64>, b: Vec<f64>) -> Result<Self, MatrixError> {
        if q.is_empty() {
            return Err(MatrixError::Empty);
        }
        if b.len() + 1 != q.len() {
            return Err(MatrixError::LengthMismatch {
                diag: q.len(),
                off: b.len(),
            });
        }
        if q.iter().chain(b.iter()).any(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        if let Some((index, &value)) = b.iter().enumerate().find(|(_, &v)| v <= 0.0) {
            return Err(MatrixError::NonPositiveOffDiagonal { index, value });
        }
        Ok(JacobiMatrix { q, b })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.q
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.b
    }

    pub fn trace(&self) -> f64 {
        self.q.iter().sum()
    }

    /// Drop the first row and column.
    pub fn truncate(&self) -> Result<JacobiMatrix, MatrixError> {
        if self.dim() < 2 {
            return Err(MatrixError::TooSmall);
        }
        Ok(JacobiMatrix {
            q: self.q[1..].to_vec(),
            b: self.b[1..].to_vec(),
        })
    }

    /// Eigenvalues with the squared first components of the unit eigenvectors
    /// as weights. The weights are the jumps of the spectral measure and sum
    /// to one. Every true weight is strictly positive, but a strongly
    /// localized eigenvector can have a first component below the rotation
    /// noise floor (~1e−16), where the accumulated value may round to exact
    /// zero; such weights are clamped to a positive sub-noise floor so the
    /// measure stays valid.
    pub fn eigendecompose(&self) -> Result<SpectralData, SpectralError> {
        let eig = eigen::decompose(&self.q, &self.b)?;
        let weights: Vec<f64> = eig
            .vectors
            .iter()
            .map(|v| (v[0] * v[0]).max(WEIGHT_NOISE_FLOOR))
            .collect();
        SpectralData::new(eig.values, weights)
    }

    /// Monic characteristic polynomial `det(zI − J)` via the three-term
    /// determinant recurrence.
    pub fn char_poly(&self, z: Complex64) -> Complex64 {
        char_poly_recurrence(&self.q, &self.b, z)
    }

    /// Monic characteristic polynomial of the truncation (first row and
    /// column removed); the empty 0x0 determinant is 1.
    pub fn char_poly_truncated(&self, z: Complex64) -> Complex64 {
        if self.dim() < 2 {
            Complex64::new(1.0, 0.0)
        } else {
            char_poly_recurrence(&self.q[1..], &self.b[1..], z)
        }
    }
}

fn char_poly_recurrence(q: &[f64], b: &[f64], z: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = z - q[0];
    for k in 1..q.len() {
        let next = (z - q[k]) * cur - b[k - 1] * b[k - 1] * prev;
        prev = cur;
        cur = next;
    }
    cur
}

pub(crate) fn pole_hit(z: Complex64, eigenvalue: f64) -> bool {
    (z - eigenvalue).norm() <= POLE_TOLERANCE * eigenvalue.abs().max(1.0)
}

/// A simple spectrum with the jumps of its spectral measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData {
    eigenvalues: Vec<f64>,
    weights: Vec<f64>,
}

impl SpectralData {
    pub fn new(eigenvalues: Vec<f64>, weights: Vec<f64>) -> Result<Self, SpectralError> {
        if eigenvalues.is_empty() {
            return Err(SpectralError::InvalidData("no eigenvalues".into()));
        }
        if eigenvalues.len() != weights.len() {
            return Err(SpectralError::InvalidData(format!(
                "{} eigenvalues but {} weights",
                eigenvalues.len(),
                weights.len()
            )));
        }
        if eigenvalues.iter().any(|x| !x.is_finite()) || weights.iter().any(|w| !w.is_finite()) {
            return Err(SpectralError::InvalidData("entries must be finite".into()));
        }
        if eigenvalues.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpectralError::InvalidData(
                "eigenvalues must be strictly increasing".into(),
            ));
        }
        if weights
            .iter()
            .any(|&w| w <= 0.0 || w > 1.0 + WEIGHT_SUM_TOLERANCE)
        {
            return Err(SpectralError::InvalidData(
                "weights must lie in (0, 1]".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(SpectralError::InvalidData(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(SpectralData {
            eigenvalues,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `m(z) = Σ w_k / (λ_k − z)`.
    pub fn weyl_m(&self, z: Complex64) -> Result<Complex64, SpectralError> {
        if let Some(&eigenvalue) = self.eigenvalues.iter().find(|&&l| pole_hit(z, l)) {
            return Err(SpectralError::PoleEvaluation { eigenvalue });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (&l, &w) in self.eigenvalues.iter().zip(&self.weights) {
            acc += w / (l - z);
        }
        Ok(acc)
    }
}

/// A finite positive measure given by atoms and masses; the input side of
/// reconstruction. Masses are renormalized to sum to one on construction and
/// the pre-normalization deviation is kept for diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<f64>,
    masses: Vec<f64>,
    normalization_deviation: f64,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<f64>, masses: Vec<f64>) -> Result<Self, SpectralError> {
        if atoms.is_empty() {
            return Err(SpectralError::InvalidData("no atoms".into()));
        }
        if atoms.len() != masses.len() {
            return Err(SpectralError::InvalidData(format!(
                "{} atoms but {} masses",
                atoms.len(),
                masses.len()
            )));
        }
        if atoms.iter().any(|x| !x.is_finite()) || masses.iter().any(|m| !m.is_finite()) {
            return Err(SpectralError::InvalidData("entries must be finite".into()));
        }
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SpectralError::InvalidData(
                "atoms must be strictly increasing".into(),
            ));
        }
        if masses.iter().any(|&m| m <= 0.0) {
            return Err(SpectralError::InvalidData(
                "masses must be strictly positive".into(),
            ));
        }
        let sum: f64 = masses.iter().sum();
        let deviation = sum - 1.0;
        if deviation.abs() > WEIGHT_SUM_TOLERANCE {
            return Err(SpectralError::InvalidData(format!(
                "masses sum to {sum}, expected 1"
            )));
        }
        let masses = masses.into_iter().map(|m| m / sum).collect();
        Ok(DiscreteMeasure {
            atoms,
            masses,
            normalization_deviation: deviation,
        })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `Σ masses − 1` as supplied, before internal renormalization.
    pub fn normalization_deviation(&self) -> f64 {
        self.normalization_deviation
    }
}

impl From<SpectralData> for DiscreteMeasure {
    fn from(s: SpectralData) -> Self {
        let sum: f64 = s.weights.iter().sum();
        DiscreteMeasure {
            atoms: s.eigenvalues,
            masses: s.weights.iter().map(|w| w / sum).collect(),
            normalization_deviation: sum - 1.0,
        }
    }
}

/// `b₁² m_T(z) − (q₁ − z − 1/m(z))`, where `m_T` belongs to the truncated
/// matrix. Identically zero in exact arithmetic; exposed as a self-check
/// primitive. For a 1x1 matrix the truncated term is empty and the identity
/// degenerates to `q₁ − z − 1/m(z) = 0`.
pub fn riccati_residual(j: &JacobiMatrix, z: Complex64) -> Result<Complex64, SpectralError> {
    let s = j.eigendecompose()?;
    let m = s.weyl_m(z)?;
    if m.norm() < ZERO_M_TOLERANCE {
        return Err(SpectralError::ZeroM);
    }
    let lhs = if j.dim() >= 2 {
        let b1 = j.off_diagonal()[0];
        let mt = j
            .truncate()
            .expect("dim >= 2")
            .eigendecompose()?
            .weyl_m(z)?;
        b1 * b1 * mt
    } else {
        Complex64::new(0.0, 0.0)
    };
    let rhs = j.diagonal()[0] - z - 1.0 / m;
    Ok(lhs - rhs)
}
