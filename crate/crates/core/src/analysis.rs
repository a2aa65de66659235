//! Per-batch judgement and the Q1–Q5 group statistics.
//!
//! A parsed sentence is correct when its FEATS-mode GRCT equals the gold
//! one, so DEPREL, UPOS and FEATS must all match while FORM, LEMMA, XPOS,
//! DEPS and MISC are ignored. Sentences the parser split or dropped, and
//! parses that do not form a tree, are excluded rather than counted wrong.
//! A batch whose original sentence is excluded is dropped from the group
//! reports altogether.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::clique::{cluster_batch, ErrorClusterSet};
use crate::conllu::Sentence;
use crate::deptree::{build_dep_tree, DepTree};
use crate::error::Error;
use crate::grct::{grct_equal, to_grct, GrctTree, LexMode};
use crate::kernel::KernelParams;
use crate::numeral::AugmentedBatch;

/// How many sentences the parser returned for one input sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(tag = "status", content = "parts", rename_all = "snake_case")
)]
pub enum SegStatus {
    Ok,
    Split(usize),
    Empty,
}

impl SegStatus {
    pub fn is_ok(self) -> bool {
        self == SegStatus::Ok
    }
}

pub fn check_segmentation(outputs: &[Sentence]) -> SegStatus {
    match outputs.len() {
        0 => SegStatus::Empty,
        1 => SegStatus::Ok,
        k => SegStatus::Split(k),
    }
}

fn feats_tree(t: &DepTree) -> GrctTree {
    to_grct(t, LexMode::Feats)
}

/// Parsed and gold trees agree on every DEPREL, UPOS and FEATS value and
/// on the tree shape.
pub fn is_correctly_parsed(parsed: &DepTree, gold: &DepTree) -> bool {
    grct_equal(&feats_tree(parsed), &feats_tree(gold))
}

/// Everything learned about one augmented batch.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    pub original_seg: SegStatus,
    /// The original's parse formed a single rooted tree.
    pub original_valid: bool,
    pub original_correct: bool,
    pub variant_seg: Vec<SegStatus>,
    pub variant_valid: Vec<bool>,
    pub variant_correct: Vec<bool>,
    pub replacements: Vec<u32>,
    /// Indices of variants with a single, valid parse.
    pub considered: Vec<usize>,
    /// Clusters over `considered`; member `k` is variant `considered[k]`.
    pub clusters: ErrorClusterSet,
    /// FEATS-mode GRCT of each cluster representative.
    pub representative_trees: Vec<GrctTree>,
    /// FEATS-mode GRCT shared by the original and all variant golds.
    pub gold_tree: GrctTree,
    pub consistent_errors: bool,
}

impl BatchResult {
    /// The original sentence was mis-segmented or unparseable, so the batch
    /// is left out of the group reports.
    pub fn excluded(&self) -> bool {
        !self.original_seg.is_ok() || !self.original_valid
    }

    pub fn considered_count(&self) -> usize {
        self.considered.len()
    }

    pub fn correct_count(&self) -> usize {
        self.considered
            .iter()
            .filter(|&&i| self.variant_correct[i])
            .count()
    }

    /// At least one variant was considered and all considered ones are correct.
    pub fn completely_correct(&self) -> bool {
        !self.considered.is_empty() && self.correct_count() == self.considered.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Replacement numerals of each cluster's members.
    pub fn cluster_numerals(&self) -> Vec<Vec<u32>> {
        self.clusters
            .clusters
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&k| self.replacements[self.considered[k]])
                    .collect()
            })
            .collect()
    }
}

struct Judged {
    seg: SegStatus,
    tree: Option<GrctTree>,
}

fn judge(outputs: &[Sentence]) -> Judged {
    let seg = check_segmentation(outputs);
    let tree = if seg.is_ok() {
        build_dep_tree(&outputs[0]).ok().map(|t| feats_tree(&t))
    } else {
        None
    };
    Judged { seg, tree }
}

/// Judges the original and every variant, then clusters the considered
/// variant parses.
pub fn analyze_batch(
    batch: &AugmentedBatch,
    parsed_original: &[Sentence],
    parsed_variants: &[Vec<Sentence>],
    p: &KernelParams,
) -> Result<BatchResult, Error> {
    if parsed_variants.len() != batch.variants.len() {
        return Err(Error::Alignment {
            parsed: parsed_variants.len(),
            expected: batch.variants.len(),
        });
    }
    let gold_tree = feats_tree(&build_dep_tree(&batch.original)?);

    let orig = judge(parsed_original);
    let original_valid = orig.seg.is_ok() && orig.tree.is_some();
    let original_correct = orig
        .tree
        .as_ref()
        .is_some_and(|t| grct_equal(t, &gold_tree));

    let n = batch.variants.len();
    let mut variant_seg = Vec::with_capacity(n);
    let mut variant_valid = Vec::with_capacity(n);
    let mut variant_correct = Vec::with_capacity(n);
    let mut considered = Vec::new();
    let mut trees = Vec::new();
    for (i, (variant, outputs)) in batch.variants.iter().zip(parsed_variants).enumerate() {
        let j = judge(outputs);
        variant_seg.push(j.seg);
        variant_valid.push(j.tree.is_some() || !j.seg.is_ok());
        match j.tree {
            Some(t) => {
                let gold = feats_tree(&build_dep_tree(&variant.gold)?);
                variant_correct.push(grct_equal(&t, &gold));
                considered.push(i);
                trees.push(t);
            }
            None => variant_correct.push(false),
        }
    }

    let clusters = cluster_batch(&trees, p)?;
    let representative_trees = clusters
        .representatives
        .iter()
        .map(|&r| trees[r].clone())
        .collect();
    let any_correct = considered.iter().any(|&i| variant_correct[i]);
    let consistent_errors = !any_correct && clusters.len() == 1;

    Ok(BatchResult {
        original_seg: orig.seg,
        original_valid,
        original_correct,
        variant_seg,
        variant_valid,
        variant_correct,
        replacements: batch.variants.iter().map(|v| v.replacement).collect(),
        considered,
        clusters,
        representative_trees,
        gold_tree,
        consistent_errors,
    })
}

/// Descriptive statistics; SD is the population one.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Stats {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    /// `None` for an empty sample. Values are sorted first, so the result
    /// does not depend on input order.
    pub fn from_values(values: &[f64]) -> Option<Stats> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let mean = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        Some(Stats {
            n,
            mean,
            sd: libm::sqrt(var),
            median,
            min: v[0],
            max: v[n - 1],
        })
    }
}

/// Whether the original sentence of a batch was parsed correctly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OriginalClass {
    Correct,
    Incorrect,
}

/// Q1–Q5 for one (split, original correct/incorrect) group. `None` is
/// rendered as NA.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupReport {
    pub split: String,
    pub original: OriginalClass,
    pub batches_considered: usize,
    /// Batches with every considered variant correct.
    pub q1_completely_correct: Option<usize>,
    /// Correct variants per batch.
    pub q2_correct_per_batch: Option<Stats>,
    /// Consistent-error batches among those not completely correct; NA when
    /// every batch is completely correct.
    pub q3_consistent_error_batches: Option<usize>,
    /// Cluster counts of batches with at least two clusters.
    pub q4_cluster_count: Option<Stats>,
    /// Representative-pair NCPTK values of those batches, pooled.
    pub q5_between_cluster_ncptk: Option<Stats>,
}

/// Splits the non-excluded batches of one treebank split by the original's
/// correctness and computes Q1–Q5 for each group.
pub fn aggregate(results: &[BatchResult], split: &str) -> [GroupReport; 2] {
    [OriginalClass::Correct, OriginalClass::Incorrect].map(|class| {
        let group: Vec<&BatchResult> = results
            .iter()
            .filter(|r| !r.excluded())
            .filter(|r| r.original_correct == (class == OriginalClass::Correct))
            .collect();
        group_report(&group, split, class)
    })
}

fn group_report(group: &[&BatchResult], split: &str, class: OriginalClass) -> GroupReport {
    let n = group.len();
    let q1 = group.iter().filter(|r| r.completely_correct()).count();
    let q2: Vec<f64> = group.iter().map(|r| r.correct_count() as f64).collect();
    let not_complete: Vec<&&BatchResult> =
        group.iter().filter(|r| !r.completely_correct()).collect();
    let q3 = not_complete.iter().filter(|r| r.consistent_errors).count();
    let multi: Vec<&&BatchResult> = group.iter().filter(|r| r.cluster_count() >= 2).collect();
    let q4: Vec<f64> = multi.iter().map(|r| r.cluster_count() as f64).collect();
    let q5: Vec<f64> = multi
        .iter()
        .flat_map(|r| r.clusters.pairwise_ncptk.iter().map(|p| p.ncptk))
        .collect();
    GroupReport {
        split: split.to_string(),
        original: class,
        batches_considered: n,
        q1_completely_correct: (n > 0).then_some(q1),
        q2_correct_per_batch: Stats::from_values(&q2),
        q3_consistent_error_batches: (!not_complete.is_empty()).then_some(q3),
        q4_cluster_count: Stats::from_values(&q4),
        q5_between_cluster_ncptk: Stats::from_values(&q5),
    }
}

/// One block of the parsing summary (originals or augmented sentences).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SummaryRow {
    pub total: usize,
    pub wrong_segmentation: usize,
    /// Single-sentence parses that did not form a tree.
    pub invalid_tree: usize,
    pub considered: usize,
    pub correctly_parsed: usize,
    /// `100 · correct / considered`, one decimal; `None` when nothing was
    /// considered.
    pub correct_pct: Option<f64>,
}

impl SummaryRow {
    pub fn from_counts(
        total: usize,
        wrong_segmentation: usize,
        invalid_tree: usize,
        correctly_parsed: usize,
    ) -> SummaryRow {
        let considered = total - wrong_segmentation - invalid_tree;
        let correct_pct = (considered > 0)
            .then(|| libm::round(1000.0 * correctly_parsed as f64 / considered as f64) / 10.0);
        SummaryRow {
            total,
            wrong_segmentation,
            invalid_tree,
            considered,
            correctly_parsed,
            correct_pct,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SplitSummary {
    pub split: String,
    pub original: SummaryRow,
    pub augmented: SummaryRow,
}

/// Parsing summary of one split. Augmented counts cover only batches whose
/// original sentence was kept.
pub fn summarize(results: &[BatchResult], split: &str) -> SplitSummary {
    let wrong = results.iter().filter(|r| !r.original_seg.is_ok()).count();
    let invalid = results
        .iter()
        .filter(|r| r.original_seg.is_ok() && !r.original_valid)
        .count();
    let kept: Vec<&BatchResult> = results.iter().filter(|r| !r.excluded()).collect();
    let correct = kept.iter().filter(|r| r.original_correct).count();

    let aug_total: usize = kept.iter().map(|r| r.variant_seg.len()).sum();
    let aug_wrong: usize = kept
        .iter()
        .map(|r| r.variant_seg.iter().filter(|s| !s.is_ok()).count())
        .sum();
    let aug_invalid: usize = kept
        .iter()
        .map(|r| {
            r.variant_seg
                .iter()
                .zip(&r.variant_valid)
                .filter(|(s, v)| s.is_ok() && !**v)
                .count()
        })
        .sum();
    let aug_correct: usize = kept.iter().map(|r| r.correct_count()).sum();

    SplitSummary {
        split: split.to_string(),
        original: SummaryRow::from_counts(results.len(), wrong, invalid, correct),
        augmented: SummaryRow::from_counts(aug_total, aug_wrong, aug_invalid, aug_correct),
    }
}

/// Maximal differing subtree pairs: walk both trees in parallel while kind,
/// label and child count agree, and report the first disagreeing pair on
/// each path.
pub fn tree_diff(a: &GrctTree, b: &GrctTree) -> Vec<(GrctTree, GrctTree)> {
    let mut out = Vec::new();
    if a.node_count() == 0 || b.node_count() == 0 {
        if a.node_count() != b.node_count() {
            out.push((a.clone(), b.clone()));
        }
        return out;
    }
    let mut stack = alloc::vec![(0usize, 0usize)];
    while let Some((x, y)) = stack.pop() {
        let (n, m) = (a.node(x), b.node(y));
        if n.kind != m.kind || n.label != m.label || n.children.len() != m.children.len() {
            out.push((a.subtree(x), b.subtree(y)));
            continue;
        }
        stack.extend(
            n.children
                .iter()
                .copied()
                .zip(m.children.iter().copied())
                .rev(),
        );
    }
    out
}
