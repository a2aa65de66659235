//! Error types shared across the core modules.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// Failures while reading CoNLL-U text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConlluError {
    #[error("line {line}: expected 10 columns, found {found}")]
    ColumnCount { line: usize, found: usize },
    #[error("line {line}: invalid {field} {value:?}")]
    InvalidNumber {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: duplicate token id {id}")]
    DuplicateId { line: usize, id: usize },
    #[error("line {line}: token id {found} out of sequence (expected {expected})")]
    IdSequence {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: comment inside a sentence body")]
    MisplacedComment { line: usize },
    #[error("line {line}: sentence has no word tokens")]
    EmptySentence { line: usize },
    #[error("sentence {sentence}: {source}")]
    Invalid { sentence: usize, source: TreeError },
}

/// Structural problems that prevent building a dependency tree.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("no root token (head = 0)")]
    NoRoot,
    #[error("multiple root tokens: {0:?}")]
    MultipleRoots(Vec<usize>),
    #[error("token {id} has head {head} which does not exist")]
    DanglingHead { id: usize, head: usize },
    #[error("cycle through tokens {0:?}")]
    Cycle(Vec<usize>),
    #[error("empty sentence")]
    Empty,
}

/// Failure to read a bracketed tree such as `(root (INTJ Hej))`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bracketed tree, byte {pos}: {msg}")]
pub struct BracketError {
    pub pos: usize,
    pub msg: &'static str,
}

/// Errors from the augmentation, kernel and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid sampling range: lo {lo} must be below hi {hi}")]
    InvalidRange { lo: u32, hi: u32 },
    #[error("invalid sampling config: {0}")]
    InvalidConfig(&'static str),
    #[error(
        "only {survivors} of {wanted} training numbers survive filtering; increase the oversample count"
    )]
    NotEnoughSurvivors { survivors: usize, wanted: usize },
    #[error("sentence has no space-delimited 4-digit numeral")]
    NoNumeral,
    #[error("replacement {0} is not a 4-digit number")]
    ReplacementOutOfRange(u32),
    #[error("replacement token {0:?} must be non-empty and free of whitespace")]
    InvalidToken(String),
    #[error("kernel parameters out of range: lambda {lambda}, mu {mu}, tolerance {tolerance}")]
    InvalidParams {
        lambda: f64,
        mu: f64,
        tolerance: f64,
    },
    #[error("cannot normalize: self-kernel is zero")]
    ZeroSelfKernel,
    #[error("tree with {nodes} nodes exceeds the oracle limit of {limit}")]
    OracleTooLarge { nodes: usize, limit: usize },
    #[error("parsed variants ({parsed}) do not align with batch variants ({expected})")]
    Alignment { parsed: usize, expected: usize },
    #[error(transparent)]
    Tree(#[from] TreeError),
}
