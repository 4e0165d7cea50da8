use thiserror::Error;

/// Every domain error the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime at most 97")]
    NonPrimeModulus(u64),
    #[error("unsupported field extension GF({p}^{k})")]
    UnsupportedExtension { p: u64, k: u32 },
    #[error("operation needs a finite field")]
    UnsupportedField,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vectors or algebras over different fields")]
    MixedFields,
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("chain member {0} is not isotropic")]
    ChainNotIsotropic(usize),
    #[error("chain is not ascending with dimensions 1..n at position {0}")]
    ChainNotAscending(usize),
    #[error("bad basis index or name: {0}")]
    BadIndex(String),
    #[error("triple value must be nonzero: {0}")]
    ZeroValue(String),
    #[error("duplicate triple: {0}")]
    DuplicateTriple(String),
    #[error("the center is isotropic")]
    CenterIsotropic,
    #[error("the algebra is not nilpotent")]
    NotNilpotent,
    #[error("dimension {0} is too small for this operation")]
    DimensionTooSmall(usize),
    #[error("the algebra is not of maximal class")]
    NotMaximalClass,
    #[error("the presentation is not a nilpotent presentation: {0}")]
    NotNilpotentPresentation(String),
    #[error("unknown catalog label {0}")]
    UnknownLabel(String),
    #[error("parameter constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("characteristic mismatch: {0}")]
    CharMismatch(String),
    #[error("unsupported dimension {0}")]
    UnsupportedDim(usize),
    #[error("algebra is not in the required branch: {0}")]
    WrongBranch(String),
    #[error("phi is not bijective")]
    PhiNotBijective,
    #[error("algebras are over different fields")]
    FieldMismatch,
    #[error("algebras have different dimensions")]
    DimMismatch,
    #[error("no catalog algebra matches (fingerprint {0})")]
    NoMatch(String),
    #[error("parameter space too large for exhaustive enumeration: {0}")]
    TooLargeForExhaustive(String),
    #[error("the group correspondence needs GF(3)")]
    WrongField,
    #[error("group is not of class C shape: {0}")]
    NotClassC(String),
    #[error("chain is not a chain of ideals: {0}")]
    NotIdealChain(String),
    #[error("group law violated: {0}")]
    LawViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPrimeModulus(_) => "NonPrimeModulus",
            Error::UnsupportedExtension { .. } => "UnsupportedExtension",
            Error::UnsupportedField => "UnsupportedField",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::MixedFields => "MixedFields",
            Error::AmbientMismatch(..) => "AmbientMismatch",
            Error::ChainNotIsotropic(_) => "ChainNotIsotropic",
            Error::ChainNotAscending(_) => "ChainNotAscending",
            Error::BadIndex(_) => "BadIndex",
            Error::ZeroValue(_) => "ZeroValue",
            Error::DuplicateTriple(_) => "DuplicateTriple",
            Error::CenterIsotropic => "CenterIsotropic",
            Error::NotNilpotent => "NotNilpotentError",
            Error::DimensionTooSmall(_) => "DimensionTooSmall",
            Error::NotMaximalClass => "NotMaximalClass",
            Error::NotNilpotentPresentation(_) => "NotNilpotentPresentation",
            Error::UnknownLabel(_) => "UnknownLabel",
            Error::ConstraintViolated(_) => "ConstraintViolated",
            Error::CharMismatch(_) => "CharMismatch",
            Error::UnsupportedDim(_) => "UnsupportedDim",
            Error::WrongBranch(_) => "WrongBranch",
            Error::PhiNotBijective => "PhiNotBijective",
            Error::FieldMismatch => "FieldMismatch",
            Error::DimMismatch => "DimMismatch",
            Error::NoMatch(_) => "NoMatch",
            Error::TooLargeForExhaustive(_) => "TooLargeForExhaustive",
            Error::WrongField => "WrongField",
            Error::NotClassC(_) => "NotClassC",
            Error::NotIdealChain(_) => "NotIdealChain",
            Error::LawViolation(_) => "LawViolation",
            Error::Parse(_) => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
