use thiserror::Error;

use crate::checker::{ConditionWitness, PartitionCheckOutcome};

/// Errors produced by parsing, tree surgery, checking and building.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed token {0:?}: names must be non-empty and free of whitespace, parentheses, commas, colons and semicolons")]
    MalformedToken(String),
    #[error("duplicate element {0:?} in ground declaration")]
    DuplicateElement(String),
    #[error("duplicate set {{{0}}}")]
    DuplicateSet(String),
    #[error("set {{{0}}} has fewer than 3 elements")]
    SetTooSmall(String),
    #[error("element {0:?} does not belong to the declared ground set")]
    UnknownElement(String),
    #[error("instance document: {0}")]
    InstanceFormat(String),

    #[error("newick: empty input")]
    EmptyNewick,
    #[error("newick: unbalanced parentheses")]
    UnbalancedParens,
    #[error("newick: duplicate label {0:?}")]
    DuplicateLeafLabel(String),
    #[error("newick: {0}")]
    NewickSyntax(String),

    #[error("tree has an unlabeled leaf vertex")]
    UnlabeledLeaf,
    #[error("tree has no vertices")]
    EmptyTree,
    #[error("edge ({0}, {1}) is not in the tree")]
    EdgeNotInTree(usize, usize),
    #[error("label {0:?} is already present in the tree")]
    DuplicateLabel(String),
    #[error("label {0:?} not found in the tree")]
    LabelNotFound(String),
    #[error("median arguments must be pairwise distinct")]
    NonDistinctArguments,
    #[error("element {0:?} does not label a leaf")]
    NotALeaf(String),
    #[error("need at least 3 elements, got {0}")]
    TooFewElements(usize),
    #[error("not a binary leaf-labeled tree: {0}")]
    NotBinary(String),
    #[error("ground set does not match the tree leaves: {0}")]
    GroundLeafMismatch(String),

    #[error("set {{{0}}} has size {1}; expected a family of 3-element sets")]
    NotTripleSystem(String, usize),
    #[error("family of {size} sets exceeds the exhaustive-enumeration guard of {limit}")]
    SizeGuardExceeded { size: usize, limit: usize },
    #[error("the union of the family must equal the ground set")]
    GroundMismatch,
    #[error("condition violated")]
    ConditionViolated(ConditionWitness),
    #[error("partition condition violated")]
    PartitionConditionViolated(Box<PartitionCheckOutcome>),
    #[error("no admissible reduction: every covered element lies in at least 3 sets")]
    NoReduction,
    #[error("reduction invariant failed (was the condition checked?): {0}")]
    ReductionInvariant(String),

    #[error("invalid generator spec: {0}")]
    InvalidGenSpec(String),
    #[error("cannot perturb this instance into a violation")]
    CannotViolate,
}

pub type Result<T> = std::result::Result<T, Error>;
