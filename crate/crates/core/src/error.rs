use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("denominator not in S: {0}")]
    NotInS(String),
    #[error("not invertible in the localization: {0}")]
    NotInvertible(String),
    #[error("tail not summable in S-localization")]
    TailNotSummable,
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("no quadratic extension")]
    NoQuadraticExtension,
    #[error("no discriminant in linear case")]
    NoDiscriminant,
    #[error("Weil index oracle failed to stabilize")]
    WeilIndexUnstable,
    #[error("tail detection failed: {0}")]
    TailDetection(String),
    #[error("functional equation violated: {0}")]
    FunctionalEquation(String),
    #[error("degenerate test data")]
    DegenerateData,
    #[error("specialization leaves S")]
    SpecializationLeavesS,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("missing extension data")]
    MissingExtension,
    #[error("ring lacks {0}")]
    MissingInRing(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
