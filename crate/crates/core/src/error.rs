use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("point/space mismatch")]
    PointSpaceMismatch,
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("invalid open set: {0}")]
    InvalidSet(String),
    #[error("mixed set representations in one cover")]
    MixedRepresentations,
    #[error("space mismatch")]
    SpaceMismatch,
    #[error("not a certified cover")]
    NotCertifiedCover,
    #[error("uncovered space")]
    UncoveredSpace,
    #[error("matrix is not invertible on the torus (det 0)")]
    SingularMatrix,
    #[error("set representation is not closed under this pullback")]
    RepresentationNotClosed,
    #[error("action does not act on this space")]
    ActionSpaceMismatch,
    #[error("{0} out of range")]
    OutOfRange(&'static str),
    #[error("witness inconsistent with nerves")]
    WitnessInconsistent,
    #[error("radius beyond space-form diameter")]
    RadiusBeyondDiameter,
    #[error("epsilon exceeds diameter scale")]
    EpsilonExceedsDiameter,
    #[error("nerve 1-skeleton is disconnected")]
    DisconnectedSkeleton,
    #[error("sample covered by no member")]
    UncoveredSample,
    #[error("invalid rational: {0}")]
    ParseRational(String),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("arithmetic overflow")]
    Overflow,
}
