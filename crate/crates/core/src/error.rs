//! Crate-wide error type.
//!
//! Domain outcomes that a caller is expected to branch on (a linear system
//! with no solution, a subset that cannot reconstruct, a search that finds
//! nothing) are expressed as `Option` in return types, not as errors. The
//! variants here are contract violations: bad dimensions, bad encodings,
//! exhausted budgets, malformed inputs.

use thiserror::Error;

/// Errors reported by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Modulus failed the primality check.
    #[error("modulus {q} is not prime")]
    NotPrime { q: u64 },

    /// Modulus exceeds the supported 16-bit prime range.
    #[error("modulus {q} exceeds the supported maximum 65521")]
    ModulusTooLarge { q: u64 },

    /// A matrix or vector entry is not a canonical field element.
    #[error("entry {value} is not reduced modulo {q}")]
    EntryOutOfRange { value: u64, q: u64 },

    /// Rows of a matrix literal have differing lengths.
    #[error("matrix rows have inconsistent lengths")]
    RaggedRows,

    /// Two operands disagree on shape.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// Two operands disagree on the field they live in.
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    /// A row, column, party, or file index is outside its domain.
    #[error("index out of range: {context}")]
    IndexOutOfRange { context: String },

    /// Evaluation points for a Vandermonde matrix repeat.
    #[error("duplicate evaluation point {point}")]
    DuplicatePoint { point: u64 },

    /// Evaluation points for a Vandermonde matrix must be nonzero.
    #[error("zero is not a valid evaluation point")]
    ZeroPoint,

    /// The field cannot host the requested number of distinct nonzero points.
    #[error("field of size {q} is too small for {n} distinct nonzero points")]
    FieldTooSmall { q: u64, n: usize },

    /// Party lists in an access structure must be 1-based, sorted, distinct.
    #[error("party set {set} is not a sorted duplicate-free 1-based list")]
    MalformedPartySet { set: String },

    /// A party index exceeds the declared number of parties.
    #[error("party {party} outside 1..={n}")]
    PartyOutOfRange { party: usize, n: usize },

    /// More parties than the bitmask representation supports.
    #[error("{n} parties exceed the supported maximum 64")]
    TooManyParties { n: usize },

    /// Some authorized set is contained in a forbidden set.
    #[error("authorized set {authorized} is contained in forbidden set {forbidden}")]
    CollectionsIntersect { authorized: String, forbidden: String },

    /// An operation needs both collections nonempty.
    #[error("access structure has an empty {which} collection")]
    EmptyCollection { which: &'static str },

    /// Full subset enumeration is capped to keep runs desk-scale.
    #[error("exhaustive enumeration over {n} parties exceeds the cap of {cap}")]
    EnumerationTooLarge { n: usize, cap: usize },

    /// Threshold parameters must satisfy t < r <= n.
    #[error("invalid threshold parameters r={r}, t={t}, n={n}")]
    BadThreshold { r: usize, t: usize, n: usize },

    /// Position maps must name every party at least once.
    #[error("position map does not cover party {party}")]
    PositionMapNotSurjective { party: usize },

    /// The secret block of a span program must be nonempty.
    #[error("secret width x must be at least 1")]
    SecretWidthZero,

    /// An enumeration would exceed the configured state budget.
    #[error("enumeration needs {needed} states but the budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },

    /// Shares are inconsistent with the encoder's column space.
    #[error("share vector is not a valid encoding under this scheme")]
    InvalidShares,

    /// Symmetric PIR needs at least two files.
    #[error("file count f={f} must be at least 2")]
    FileCountTooSmall { f: usize },

    /// A per-server symbol encoding would not fit in 64 bits.
    #[error("symbol encoding overflows 64 bits: {context}")]
    SymbolOverflow { context: String },

    /// Joint pmf counts do not sum to the declared total.
    #[error("pmf counts sum to {sum} but the declared total is {total}")]
    Unnormalized { sum: u64, total: u64 },

    /// Mutual information requires disjoint variable sets.
    #[error("variable sets overlap at position {var}")]
    OverlappingVariables { var: usize },

    /// A probability or probability-like argument left [0, 1].
    #[error("argument {name}={value} outside [0, 1]")]
    ProbabilityOutOfRange { name: &'static str, value: f64 },

    /// A leakage or probability argument must be nonnegative.
    #[error("argument {name}={value} must be nonnegative")]
    NegativeArgument { name: &'static str, value: f64 },

    /// A rational-valued text field failed to parse.
    #[error("malformed rational literal {text:?}")]
    BadRational { text: String },

    /// Sweeps need at least one trial.
    #[error("trial count must be at least 1")]
    ZeroTrials,

    /// A JSON artifact declares a kind this operation does not consume.
    #[error("artifact kind {found:?} where {expected:?} was required")]
    WrongKind { expected: &'static str, found: String },

    /// JSON parsing or schema validation failed.
    #[error("malformed JSON artifact: {detail}")]
    BadJson { detail: String },
}

impl Error {
    /// Stable one-token machine-readable code for CLI error lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime { .. } => "not_prime",
            Error::ModulusTooLarge { .. } => "modulus_too_large",
            Error::EntryOutOfRange { .. } => "entry_out_of_range",
            Error::RaggedRows => "ragged_rows",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ModulusMismatch { .. } => "modulus_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::DuplicatePoint { .. } => "duplicate_point",
            Error::ZeroPoint => "zero_point",
            Error::FieldTooSmall { .. } => "field_too_small",
            Error::MalformedPartySet { .. } => "malformed_party_set",
            Error::PartyOutOfRange { .. } => "party_out_of_range",
            Error::TooManyParties { .. } => "too_many_parties",
            Error::CollectionsIntersect { .. } => "collections_intersect",
            Error::EmptyCollection { .. } => "empty_collection",
            Error::EnumerationTooLarge { .. } => "enumeration_too_large",
            Error::BadThreshold { .. } => "bad_threshold",
            Error::PositionMapNotSurjective { .. } => "position_map_not_surjective",
            Error::SecretWidthZero => "secret_width_zero",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::InvalidShares => "invalid_shares",
            Error::FileCountTooSmall { .. } => "file_count_too_small",
            Error::SymbolOverflow { .. } => "symbol_overflow",
            Error::Unnormalized { .. } => "unnormalized_pmf",
            Error::OverlappingVariables { .. } => "overlapping_variables",
            Error::ProbabilityOutOfRange { .. } => "probability_out_of_range",
            Error::NegativeArgument { .. } => "negative_argument",
            Error::BadRational { .. } => "bad_rational",
            Error::ZeroTrials => "zero_trials",
            Error::WrongKind { .. } => "wrong_kind",
            Error::BadJson { .. } => "bad_json",
        }
    }
}
