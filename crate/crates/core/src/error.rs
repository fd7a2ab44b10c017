use thiserror::Error;

/// Errors raised by the analysis routines.
///
/// Variants fall into two families: structural problems with the input
/// (see [`Error::is_numerical`] returning `false`) and failures of the
/// numerical machinery on otherwise well-formed input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{which} is rank deficient (rank {rank}, expected {expected})")]
    RankDeficient {
        which: &'static str,
        rank: usize,
        expected: usize,
    },

    #[error("state dimension n={n} must exceed port dimension m={m}")]
    StateDimensionTooSmall { n: usize, m: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("realization is not state-space symmetric (defect {defect:.3e})")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not symmetric (defect {defect:.3e})")]
    NotSymmetricMatrix { defect: f64 },

    #[error("{0} is singular")]
    Singular(&'static str),

    #[error("{0} is not symmetric positive definite")]
    NotPositiveDefinite(&'static str),

    #[error(
        "eigenvalue {re:+.3e}{im:+.3e}j lies within the imaginary-axis guard band: system is not strictly passive"
    )]
    ImaginaryAxisEigenvalue { re: f64, im: f64 },

    #[error("expected {expected} eigenvalues in the requested half-plane, found {found}")]
    HalfPlaneCount { expected: usize, found: usize },

    #[error("invariant subspace basis X is singular (reciprocal condition {rcond:.3e}); realization is not minimal")]
    SingularBasis { rcond: f64 },

    #[error("Riccati solution {0} is indefinite: system is not passive or not minimal")]
    Indefinite(&'static str),

    #[error("eigenvalue iteration did not converge: {0}")]
    Convergence(String),

    #[error("spectral zeros are not real (max |Im| = {max_imag:.3e})")]
    NonRealSpectralZeros { max_imag: f64 },

    #[error("repeated poles (gap {gap:.3e})")]
    RepeatedPoles { gap: f64 },

    #[error("poles must be real, distinct and negative: {0}")]
    InvalidPoles(String),

    #[error("residues do not share a common sign")]
    MixedResidueSigns,

    #[error("residue at pole {pole} vanishes (pole-zero cancellation)")]
    ZeroResidue { pole: f64 },

    #[error("operation requires {expected} residues, found {found} sign")]
    WrongResidueSign {
        expected: &'static str,
        found: &'static str,
    },

    #[error("transfer function is not biproper: {0}")]
    NotBiproper(String),

    #[error("expected a {expected} balanced realization, got {found}")]
    WrongForm {
        expected: &'static str,
        found: &'static str,
    },

    #[error("operation requires a single-input single-output system (m={m})")]
    NotSiso { m: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// `true` for failures of the numerical machinery, `false` for input or
    /// validation problems.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ImaginaryAxisEigenvalue { .. }
                | Error::HalfPlaneCount { .. }
                | Error::SingularBasis { .. }
                | Error::Indefinite(_)
                | Error::Convergence(_)
                | Error::NonRealSpectralZeros { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
