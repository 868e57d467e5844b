//! Error type shared by every module in the core crate.
//!
//! Each variant carries a stable machine-readable code (see [`Error::code`])
//! so callers and tests can match failures without parsing prose.

use alloc::string::String;
use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// All failure modes of the core pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An encoder was asked to encode an empty interaction sequence.
    EmptySequence,
    /// An item id fell outside the embedding table.
    ItemOutOfRange { item: usize, num_items: usize },
    /// A loss or gradient evaluation produced a non-finite intermediate.
    NumericalOverflow,
    /// The invariance penalty was called with an empty environment map.
    NoEnvironments,
    /// An attribute evidence record matched no valid items.
    DanglingAttribute { name: String, value: String },
    /// An evidence embedding collapsed to the zero vector.
    DegenerateEmbedding { evidence: usize },
    /// A similarity query was made against an all-zero preference vector.
    ZeroPreferenceVector,
    /// Live invariance scoring needs at least two environment encodings.
    InsufficientEnvironments,
    /// No user has interactions in two or more environments.
    NoMultiEnvUsers,
    /// Retrieval was called with an empty candidate list.
    NoCandidates,
    /// A vector or matrix dimension did not match the model configuration.
    ShapeMismatch { expected: usize, actual: usize },
    /// An operation on attention weights was called with no evidence.
    NoEvidence,
    /// A ranking metric received a rank below 1.
    InvalidRank,
    /// OOD degradation is undefined for a non-positive training metric.
    DegenerateBaseline,
    /// An evaluation aggregate was requested over an empty set.
    EmptyEvalSet,
    /// The evaluation split contains no usable test cases.
    EmptySplit,
    /// A generator or hyper-parameter configuration violates its invariants.
    BadConfig(String),
    /// A dataset contains no interactions.
    EmptyDataset,
}

impl Error {
    /// Stable identifier for the failure mode.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptySequence => "empty-sequence",
            Error::ItemOutOfRange { .. } => "item-out-of-range",
            Error::NumericalOverflow => "numerical-overflow",
            Error::NoEnvironments => "no-environments",
            Error::DanglingAttribute { .. } => "dangling-attribute",
            Error::DegenerateEmbedding { .. } => "degenerate-embedding",
            Error::ZeroPreferenceVector => "zero-preference-vector",
            Error::InsufficientEnvironments => "insufficient-environments",
            Error::NoMultiEnvUsers => "no-multi-env-users",
            Error::NoCandidates => "no-candidates",
            Error::ShapeMismatch { .. } => "shape-mismatch",
            Error::NoEvidence => "no-evidence",
            Error::InvalidRank => "invalid-rank",
            Error::DegenerateBaseline => "degenerate-baseline",
            Error::EmptyEvalSet => "empty-eval-set",
            Error::EmptySplit => "empty-split",
            Error::BadConfig(_) => "bad-config",
            Error::EmptyDataset => "empty-dataset",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySequence => write!(f, "empty-sequence: context has no items"),
            Error::ItemOutOfRange { item, num_items } => write!(
                f,
                "item-out-of-range: item {item} outside catalog of {num_items}"
            ),
            Error::NumericalOverflow => {
                write!(f, "numerical-overflow: non-finite intermediate value")
            }
            Error::NoEnvironments => write!(f, "no-environments: empty environment map"),
            Error::DanglingAttribute { name, value } => write!(
                f,
                "dangling-attribute: attribute {name}={value} matches no items"
            ),
            Error::DegenerateEmbedding { evidence } => write!(
                f,
                "degenerate-embedding: evidence {evidence} has zero-norm embedding"
            ),
            Error::ZeroPreferenceVector => {
                write!(f, "zero-preference-vector: similarity against zero vector")
            }
            Error::InsufficientEnvironments => write!(
                f,
                "insufficient-environments: live variance needs at least 2 encodings"
            ),
            Error::NoMultiEnvUsers => write!(
                f,
                "no-multi-env-users: no user spans two or more environments"
            ),
            Error::NoCandidates => write!(f, "no-candidates: empty retrieval candidate list"),
            Error::ShapeMismatch { expected, actual } => write!(
                f,
                "shape-mismatch: expected dimension {expected}, got {actual}"
            ),
            Error::NoEvidence => write!(f, "no-evidence: attention over empty evidence set"),
            Error::InvalidRank => write!(f, "invalid-rank: ranks are 1-based"),
            Error::DegenerateBaseline => {
                write!(f, "degenerate-baseline: training metric must be positive")
            }
            Error::EmptyEvalSet => write!(f, "empty-eval-set: no explanations to aggregate"),
            Error::EmptySplit => write!(f, "empty-split: evaluation split has no test cases"),
            Error::BadConfig(msg) => write!(f, "bad-config: {msg}"),
            Error::EmptyDataset => write!(f, "empty-dataset: no interactions"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_are_stable() {
        assert_eq!(Error::EmptySequence.code(), "empty-sequence");
        assert_eq!(
            Error::ItemOutOfRange {
                item: 9,
                num_items: 3
            }
            .code(),
            "item-out-of-range"
        );
    }

    #[test]
    fn display_includes_code() {
        let msg = alloc::format!(
            "{}",
            Error::ShapeMismatch {
                expected: 4,
                actual: 7
            }
        );
        assert!(msg.starts_with("shape-mismatch:"));
    }
}
