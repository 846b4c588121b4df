use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix: pivot {pivot:e} at or below threshold {threshold:e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("Sylvester operator is singular: the spectra of the two pencils collide")]
    SpectrumCollision,

    #[error("eigenvalue iteration failed to converge")]
    NoConvergence,

    #[error("poles are not simple: minimum pairwise gap {gap:e}")]
    RepeatedPoles { gap: f64 },

    #[error("Cauchy index needs a SISO system, got {outputs} outputs and {inputs} inputs")]
    NotSiso { inputs: usize, outputs: usize },

    #[error("pole {pole} is classified as real but its residue {residue} is not")]
    AmbiguousPole { pole: Complex64, residue: Complex64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("system is unstable (spectral abscissa {0:e})")]
    Unstable(f64),

    #[error("projection basis is rank deficient (singular value ratio {0:e})")]
    RankDeficient(f64),

    #[error("reduced E matrix is numerically singular (condition number {0:e})")]
    SingularProjection(f64),

    #[error("reduced Gramian is ill-conditioned (condition number {0:e})")]
    IllConditionedGramian(f64),

    #[error("line search exhausted after {trials} step sizes")]
    LineSearchExhausted { trials: usize },

    #[error("iterate {k} is undefined: {source}")]
    IterateUndefined {
        k: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("H2 cache was built for a different full-order model")]
    CacheMismatch,
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "singular-matrix",
            Error::SpectrumCollision => "spectrum-collision",
            Error::NoConvergence => "no-convergence",
            Error::RepeatedPoles { .. } => "repeated-poles",
            Error::NotSiso { .. } => "not-siso",
            Error::AmbiguousPole { .. } => "ambiguous-pole",
            Error::DimensionMismatch(_) => "dimension-mismatch",
            Error::InvalidArgument(_) => "invalid-argument",
            Error::Unstable(_) => "unstable-system",
            Error::RankDeficient(_) => "rank-deficient",
            Error::SingularProjection(_) => "singular-projection",
            Error::IllConditionedGramian(_) => "ill-conditioned-gramian",
            Error::LineSearchExhausted { .. } => "line-search-exhausted",
            Error::IterateUndefined { .. } => "iterate-undefined",
            Error::CacheMismatch => "cache-mismatch",
        }
    }
}
