use thiserror::Error;

/// Errors raised by the kinematics routines.
///
/// Variants fall in two families: input validation (bad geometry, bad
/// quaternion, malformed parameters) and solver outcomes (rank problems,
/// inconsistent or unreachable leg lengths). [`Error::is_infeasibility`]
/// separates the two.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is rank deficient (rank {rank}, need 6)")]
    RankDeficient { rank: usize },

    #[error("wrong numerical rank: expected {expected}, found {found}")]
    WrongRank { expected: usize, found: usize },

    #[error("inconsistent system: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Inconsistent { residual: f64, tolerance: f64 },

    #[error("duplicate base vertex: points {first} and {second} coincide")]
    DuplicateVertex { first: usize, second: usize },

    #[error("top transform not orthogonal: max |A^T A - I| = {deviation:e}")]
    NotOrthogonal { deviation: f64 },

    #[error("rescaling factor {0} outside (0, 1)")]
    InvalidScale(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("quaternion not unit (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("leg {index} collapsed to zero length")]
    DegenerateLeg { index: usize },

    #[error("leg length {index} is not strictly positive")]
    NonPositiveLength { index: usize },

    #[error("base lies on a conic (rank {rank}); use the singular solver")]
    SingularBase { rank: usize },

    #[error("base is degenerate (rank {rank} < 5)")]
    DegenerateBase { rank: usize },

    #[error("no rotation is consistent with the leg lengths: {0}")]
    Infeasible(String),

    #[error("position planes are parallel")]
    ParallelPlanes,

    #[error("line misses the sphere (w1 - |r0|^2 = {gap:e})")]
    NoIntersection { gap: f64 },

    #[error("null direction has vanishing first component; w1 cannot parameterize the family")]
    NotParameterizable,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// True for errors that describe an unsolvable but well-formed problem.
    pub fn is_infeasibility(&self) -> bool {
        matches!(
            self,
            Error::Inconsistent { .. }
                | Error::SingularBase { .. }
                | Error::DegenerateBase { .. }
                | Error::Infeasible(_)
                | Error::NoIntersection { .. }
                | Error::ParallelPlanes
                | Error::RankDeficient { .. }
                | Error::WrongRank { .. }
                | Error::NotParameterizable
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
