use thiserror::Error;

/// Errors raised by the library. Each variant maps to a stable machine-readable
/// code (see [`Error::code`]) used by the CLI reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown group label `{0}`")]
    UnknownGroup(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("sieve limit {0} exceeds the supported maximum of 10^8")]
    LimitTooLarge(u64),
    #[error("requested range {requested} exceeds sieve limit {limit}")]
    SieveRangeExceeded { requested: u64, limit: u64 },
    #[error("invalid field descriptor: {0}")]
    InvalidField(String),
    #[error("prime {0} is ramified (or divides the polynomial discriminant)")]
    RamifiedPrime(u64),
    #[error("{n} is not coprime to the field discriminant")]
    NotCoprimeToDiscriminant { n: u64 },
    #[error("Frobenius class is not determined by the factorization type {0:?}")]
    AmbiguousClass(Vec<usize>),
    #[error("partition of length {len} exceeds the number of local roots {roots}")]
    PartitionTooLong { len: usize, roots: usize },
    #[error("integer coefficient overflow")]
    CoefficientOverflow,
    #[error("tail bound {tail:e} exceeds tolerance {tolerance:e}")]
    TruncationInsufficient { tail: f64, tolerance: f64 },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("x = {x} is below the admissible range (log(e D_K))^4 = {threshold}")]
    DomainTooSmall { x: f64, threshold: f64 },
    #[error("unsupported subgroup action: {0}")]
    UnsupportedSubgroupAction(String),
    #[error("no intersection rule for group `{0}`; supply explicit pairs")]
    UndecidableIntersectionRule(String),
    #[error("field `{0}` is not quadratic")]
    NotQuadratic(String),
    #[error("fields `{0}` and `{1}` coincide")]
    EqualFields(String, String),
    #[error("discriminant {0} too large to factor")]
    DiscriminantTooLarge(String),
    #[error("catalog line {line}: {message}")]
    CatalogParse { line: usize, message: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownGroup(_) => "unknown_group",
            Error::InvalidGroup(_) => "invalid_group",
            Error::LimitTooLarge(_) => "limit_too_large",
            Error::SieveRangeExceeded { .. } => "sieve_range_exceeded",
            Error::InvalidField(_) => "invalid_field",
            Error::RamifiedPrime(_) => "ramified_prime",
            Error::NotCoprimeToDiscriminant { .. } => "not_coprime_to_discriminant",
            Error::AmbiguousClass(_) => "ambiguous_class",
            Error::PartitionTooLong { .. } => "partition_too_long",
            Error::CoefficientOverflow => "coefficient_overflow",
            Error::TruncationInsufficient { .. } => "truncation_insufficient",
            Error::ParameterOutOfRange(_) => "parameter_out_of_range",
            Error::DomainTooSmall { .. } => "domain_too_small",
            Error::UnsupportedSubgroupAction(_) => "unsupported_subgroup_action",
            Error::UndecidableIntersectionRule(_) => "undecidable_intersection_rule",
            Error::NotQuadratic(_) => "not_quadratic",
            Error::EqualFields(..) => "equal_fields",
            Error::DiscriminantTooLarge(_) => "discriminant_too_large",
            Error::CatalogParse { .. } => "catalog_parse",
        }
    }

    /// Errors caused by bad input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::UnknownGroup(_)
                | Error::InvalidGroup(_)
                | Error::LimitTooLarge(_)
                | Error::InvalidField(_)
                | Error::ParameterOutOfRange(_)
                | Error::DomainTooSmall { .. }
                | Error::CatalogParse { .. }
                | Error::NotQuadratic(_)
                | Error::EqualFields(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
