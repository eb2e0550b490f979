use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Coarse classification used by front ends to pick exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input violates a documented precondition.
    Precondition,
    /// The input is well formed but outside what is implemented.
    Unsupported,
    /// An internal invariant failed; the result must not be trusted.
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("dimension vector error: {0}")]
    DimensionVector(String),
    #[error("equal-rank precondition violated at the endpoints of `{arrow}` ({plus} != {minus})")]
    UnequalRank { arrow: String, plus: u32, minus: u32 },
    #[error("contraction undefined: `{0}` is a loop")]
    LoopContraction(String),
    #[error("path is not composable: {0}")]
    NotComposable(String),
    #[error("path is not closed: {0}")]
    NotClosed(String),
    #[error("cyclic word cancels to an idempotent")]
    DegenerateCycle,
    #[error("arrow `{0}` is not the designated invertible arrow")]
    NotInvertible(String),
    #[error("substitution for `{0}` does not share its endpoints")]
    EndpointMismatch(String),
    #[error("unsupported reduction: {0}")]
    UnsupportedReduction(String),
    #[error("representation is outside the heart locus: {0}")]
    HeartLocus(String),
    #[error("mutation assumption violated: {0}")]
    MutationAssumption(String),
    #[error("polynomial is not symmetric under the slot permutations of its dimension vector")]
    NotSymmetric,
    #[error("scope error: {0}")]
    Scope(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element has a non-zero scalar part and is not in the Lie algebra")]
    NotInLieAlgebra,
    #[error("path is not generic: {0}")]
    NonGenericPath(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::UnsupportedReduction(_) | Error::Scope(_) | Error::BoundExceeded(_) => {
                ErrorKind::Unsupported
            }
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Precondition,
        }
    }
}
