use alloc::string::String;

/// Errors raised by the numerical core.
///
/// Variants are grouped by what went wrong: domain violations (bad input),
/// numerical failures (a solver could not produce a trustworthy answer), and
/// internal invariant violations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("Möbius map has a pole at z = -1")]
    PoleAtMinusOne,

    #[error("domain violation at index {index}: {invariant}")]
    DomainViolation { index: usize, invariant: &'static str },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("eigenvalue {index} lies on or outside the stability boundary; the system is not Bessel")]
    BoundaryEigenvalue { index: usize },

    #[error("basis matrix is singular")]
    SingularBasis,

    #[error("basis condition number {condition:.3e} exceeds the Riesz-basis limit {limit:.1e}")]
    IllConditionedBasis { condition: f64, limit: f64 },

    #[error("Hermitian eigen-solve did not converge after {sweeps} sweeps")]
    EigenSolveFailure { sweeps: usize },

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("tail of the time integral is not bounded: spectral margin {margin:.3e} <= 0")]
    TailNotBounded { margin: f64 },

    #[error("no feasible discretization step: continuous lower bound {lower:.3e} <= 0")]
    NoFeasibleDelta { lower: f64 },

    #[error("semigroup is not exponentially stable (omega = {omega:.3e} >= 0)")]
    InfeasibleStability { omega: f64 },

    #[error("coordinate {0} is zero in every sampling vector; the system cannot be complete")]
    DeadCoordinate(usize),

    #[error("cluster anchored at {anchor} holds {size} points, more than m = {m}")]
    ClusterTooLarge { anchor: usize, size: usize, m: usize },

    #[error("points {first} and {second} coincide")]
    DuplicatePoint { first: usize, second: usize },

    #[error("sampled system is not a frame: lower bound {lower:.3e} vs upper {upper:.3e}")]
    NotAFrame { lower: f64, upper: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for errors that come from a numerical procedure rather than from
    /// bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenSolveFailure { .. }
                | Error::NotAFrame { .. }
                | Error::SingularBasis
                | Error::IllConditionedBasis { .. }
                | Error::NoFeasibleDelta { .. }
                | Error::TailNotBounded { .. }
        )
    }

    /// True for violated internal invariants.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::NotHermitian { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;
