//! Numeral-substitution consistency analysis for dependency parsers.
//!
//! This crate holds the allocation-only core: the CoNLL-U data model and
//! (de)serializer, seeded numeral sampling and batch synthesis, the
//! Grammatical Relation Centered Tree (GRCT) transform, the partial tree
//! kernel with its normalized form, Bron–Kerbosch error clustering, and the
//! per-batch / per-group statistics. Process management, file IO and report
//! rendering live in the `udconsist` companion crate.
//!
//! The crate is `no_std` and needs only `alloc`. Enable the `serde` feature to
//! derive (de)serialization for the report types.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod clique;
pub mod conllu;
pub mod deptree;
pub mod error;
pub mod grct;
pub mod kernel;
pub mod numeral;
pub mod sampling;

pub use analysis::{
    aggregate, analyze_batch, check_segmentation, is_correctly_parsed, summarize, tree_diff,
    BatchResult, GroupReport, OriginalClass, SegStatus, SplitSummary, Stats, SummaryRow,
};
pub use clique::{bron_kerbosch, cluster_batch, identity_graph, ErrorClusterSet, IdentityGraph};
pub use conllu::{parse_conllu, parse_conllu_lenient, serialize_conllu, Sentence, Token, Treebank};
pub use deptree::{build_dep_tree, DepTree};
pub use error::{BracketError, ConlluError, Error, TreeError};
pub use grct::{grct_equal, to_grct, GrctNode, GrctTree, LexMode, NodeKind};
pub use kernel::{ncptk, ptk, ptk_oracle, KernelParams};
pub use numeral::{
    augment_treebank, find_year_numerals, substitute_numeral, substitute_tokens, synthesize_batch,
    AugmentedBatch, NumeralMatch, Variant,
};
pub use sampling::{sample_eval_numbers, sample_training_numbers, SamplingConfig, SplitMix64};
