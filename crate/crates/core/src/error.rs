use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("basis family is empty")]
    EmptyBases,
    #[error("not a matroid: {0}")]
    NotAMatroid(String),
    #[error("invalid rank {r} for ground set of size {n}")]
    InvalidRank { r: i64, n: usize },
    #[error("matrix has no rows or no columns")]
    EmptyMatrix,
    #[error("minor removes every element of the ground set")]
    GroundSetExhausted,
    #[error("ground set of size {0} exceeds the limit of 64")]
    GroundSetTooLarge(usize),
    #[error("ground sets differ in size ({0} vs {1})")]
    GroundSetMismatch(usize, usize),
    #[error("constituent {index} is not a quotient of constituent {}", index + 1)]
    NotAQuotientChain { index: usize },
    #[error("first matroid is not a quotient of the second")]
    NotAQuotient,
    #[error("not a flag basis of the given flag matroid")]
    NotABasis,
    #[error("generators do not span a pointed cone")]
    NotPointed,
    #[error("cone is not unimodular")]
    NotUnimodular,
    #[error("ray pairs to zero with the direction even after tie-breaking")]
    ZeroPairing,
    #[error("slice hypothesis violated by term {0}")]
    HypothesisViolated(usize),
    #[error("no generic weight vector found")]
    DegenerateWeights,
    #[error("pole at t = 1 does not cancel; the sum is not a Laurent polynomial")]
    NonCancellingPole,
    #[error("flag matroid has a loop in its first or a coloop in its last constituent")]
    HasLoopOrColoop,
    #[error("polynomial is not a polynomial in uv")]
    NotInUV,
    #[error("polynomial is not divisible by q - 1")]
    NotDivisible,
    #[error("ranks agree, the reduced polynomial is undefined")]
    RankGapZero,
    #[error("element {0} is a loop or a coloop")]
    LoopOrColoop(usize),
    #[error("invalid input: {0}")]
    Malformed(String),
    #[error("unknown invariant {0:?}")]
    UnknownInvariant(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for failures that point at a bug rather than at bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::NonCancellingPole
                | Error::NotInUV
                | Error::NotDivisible
                | Error::ZeroPairing
                | Error::DegenerateWeights
                | Error::Internal(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
