//! Set systems realized as medians of binary phylogenetic trees.
//!
//! A family of 3-element subsets of a ground set `X` can be mapped
//! injectively onto the interior vertices of a binary tree with leaf set `X`
//! via the median of each triple exactly when every non-empty subfamily
//! covers at least two more elements than its cardinality. This crate
//! decides that condition (two independent routes), constructs a realizing
//! tree when it holds, and verifies the result. The general-cardinality
//! variant is also covered: a family of sets of size >= 3 whose median
//! blocks partition the interior vertices.
//!
//! Main entry points:
//!
//! - [`SetSystem::parse`] / [`parse_newick`] / [`serialize_newick`] for IO;
//! - [`check_poly`] / [`check_bruteforce`] / [`check_partition_condition`]
//!   for the decision procedures;
//! - [`build_tree`] / [`build_partition_tree`] for construction;
//! - [`verify_injective`] / [`verify_partition`] for verification;
//! - [`generate_instance`] and [`bench_checkers`] for instance generation
//!   and checker benchmarking.

#![forbid(unsafe_code)]

pub mod benchmark;
pub mod builder;
pub mod checker;
pub mod error;
pub mod generate;
pub mod matching;
pub mod median;
pub mod newick;
pub mod set_system;
pub mod tree;

pub use benchmark::{bench_checkers, rows_to_csv, BenchGrid, BenchRow, CSV_HEADER};
pub use builder::{
    build_partition_tree, build_partition_tree_traced, build_tree, build_tree_traced,
    find_reduction, reduction_at, MergeBranch, ReductionKind, ReductionStep,
};
pub use checker::{
    check_bruteforce, check_partition_condition, check_poly, fan_expansion, tight_sets, CheckMode,
    CheckOutcome, ConditionStatus, ConditionWitness, PartitionCheckOutcome, PartitionWitness,
    TightFamily, TightSubfamily, DEFAULT_BRUTE_LIMIT, DEFAULT_TIGHT_LIMIT,
};
pub use error::{Error, Result};
pub use generate::{
    default_elements, generate_instance, perturb_partition_to_violation, perturb_to_violation,
    random_binary_tree, sample_partition_system, sample_realizable_system, GenSpec,
    GeneratedInstance,
};
pub use matching::{max_bipartite_matching, MatchingOutcome};
pub use median::{
    median, median_set, verify_injective, verify_partition, AssignmentEntry, CollisionWitness,
    VerificationReport, Verdict, MEDIAN_ENUM_THRESHOLD,
};
pub use newick::{canonical_vertex_names, parse_newick, serialize_newick};
pub use set_system::{Element, SetSystem};
pub use tree::{canonicalize_to_binary, BinaryXTree, Tree};
