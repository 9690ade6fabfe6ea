//! Completely positive tensors: necessary dominance conditions, structural
//! certificates and the classifier.

mod classify;
mod constructions;
mod decomposer;
pub mod dominance;

pub use classify::{classify_cp, CpOptions};
pub use constructions::{
    cauchy_cp_decomposition, cauchy_generator, decomposition_verify, decomposition_verify_with,
    gap_family, interleave, interleaved_hankel_cp_test, quadrature_error, rank_one_cp_check,
    DecompositionCheck,
};
pub use decomposer::{Decomposer, GreedyDecomposer, SubprocessDecomposer};
pub use dominance::{
    family_mean, one_duplicated_check, one_duplicated_family, one_duplicated_mean,
    one_duplicated_violation, s_duplicate_verify, zero_entry_closure, Closure, DuplicateFamily,
};
