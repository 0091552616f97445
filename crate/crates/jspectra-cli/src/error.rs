//! Exit-code taxonomy: 2 schema/usage, 3 numerical failure, 4 the spectra
//! pair does not classify, 5 an inadmissible free parameter, 6 verification
//! found violated identities.

use jspectra::{
    InterlaceError, MassSpringError, MatrixError, PerturbationError, SolveError, SpectralError,
};

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Numerical(String),
    Classification(String),
    Admissibility(String),
    VerifyFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Classification(_) => 4,
            CliError::Admissibility(_) => 5,
            CliError::VerifyFailed(_) => 6,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Schema(m) => format!("error (schema): {m}"),
            CliError::Numerical(m) => format!("error (numerical): {m}"),
            CliError::Classification(m) => format!("error (classification): {m}"),
            CliError::Admissibility(m) => format!("error (admissibility): {m}"),
            CliError::VerifyFailed(n) => {
                format!("verification failed: {n} check(s) over tolerance")
            }
        }
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<MassSpringError> for CliError {
    fn from(e: MassSpringError) -> Self {
        match e {
            MassSpringError::Nonphysical { .. } | MassSpringError::InconsistentFreeEnd { .. } => {
                CliError::Numerical(e.to_string())
            }
            other => CliError::Schema(other.to_string()),
        }
    }
}

impl From<PerturbationError> for CliError {
    fn from(e: PerturbationError) -> Self {
        match e {
            PerturbationError::Spectral(inner) => inner.into(),
            other => CliError::Schema(other.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::PoleEvaluation { .. } | SpectralError::ZeroM => {
                CliError::Admissibility(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<InterlaceError> for CliError {
    fn from(e: InterlaceError) -> Self {
        match e {
            InterlaceError::LengthMismatch { .. }
            | InterlaceError::Empty
            | InterlaceError::NotSorted { .. } => CliError::Schema(e.to_string()),
            other => CliError::Classification(other.to_string()),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::OmegaOutOfGap { .. }
            | SolveError::OmegaOutOfRange { .. }
            | SolveError::DivisionGuard(_)
            | SolveError::DegenerateShared
            | SolveError::InfeasibleAlpha { .. }
            | SolveError::NoSolution { .. }
            | SolveError::UnboundedGap { .. } => CliError::Admissibility(e.to_string()),
            SolveError::Interlace(inner) => inner.into(),
            SolveError::Spectral(inner) => inner.into(),
            SolveError::Perturbation(inner) => inner.into(),
            SolveError::Matrix(inner) => CliError::Numerical(inner.to_string()),
            SolveError::DegenerateProduct
            | SolveError::Breakdown { .. }
            | SolveError::BracketingFailure => CliError::Numerical(e.to_string()),
        }
    }
}
