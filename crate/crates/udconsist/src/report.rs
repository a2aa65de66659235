//! Report model (serialized as JSON) and its plain-text renderings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use udconsist_core::clique::ClusterPair;
use udconsist_core::{
    tree_diff, BatchResult, GroupReport, KernelParams, OriginalClass, SamplingConfig, SegStatus,
    Sentence, SplitSummary, Stats,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub sampling: SamplingConfig,
    pub kernel: KernelParams,
    pub eval_numbers: Vec<u32>,
    pub splits: Vec<SplitReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitReport {
    pub split: String,
    pub treebank: String,
    pub sentences: usize,
    /// Gold sentences left out because they do not form a tree.
    pub skipped_gold: Vec<SkippedSentence>,
    pub summary: SplitSummary,
    pub groups: Vec<GroupReport>,
    pub batches: Vec<BatchRecord>,
    pub failures: Vec<BatchFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedSentence {
    pub sentence_index: usize,
    pub sent_id: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchFailure {
    pub batch: usize,
    pub sentence_index: usize,
    pub sent_id: Option<String>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub batch: usize,
    pub sentence_index: usize,
    pub sent_id: Option<String>,
    pub text: String,
    pub replaced_digits: String,
    pub original_seg: SegStatus,
    pub original_valid: bool,
    pub original_correct: bool,
    pub excluded: bool,
    pub considered: usize,
    pub correct: usize,
    pub consistent_errors: bool,
    pub variants: Vec<VariantRecord>,
    pub clusters: Vec<ClusterRecord>,
    pub between_cluster_ncptk: Vec<ClusterPair>,
    pub gold_tree: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantRecord {
    pub replacement: u32,
    pub seg: SegStatus,
    pub valid: bool,
    pub correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterRecord {
    /// Variant indices (0-based, in batch order).
    pub members: Vec<usize>,
    pub numerals: Vec<u32>,
    pub correct: bool,
    pub representative: String,
    /// Maximal differing subtrees, representative side first.
    pub diff: Vec<[String; 2]>,
}

impl BatchRecord {
    pub fn new(
        batch: usize,
        sentence_index: usize,
        original: &Sentence,
        digits: &str,
        r: &BatchResult,
    ) -> Self {
        let numerals = r.cluster_numerals();
        let clusters = r
            .clusters
            .clusters
            .iter()
            .zip(&r.representative_trees)
            .zip(numerals)
            .map(|((members, rep), numerals)| {
                let members: Vec<usize> = members.iter().map(|&m| r.considered[m]).collect();
                ClusterRecord {
                    correct: r.variant_correct[members[0]],
                    members,
                    numerals,
                    representative: rep.to_string(),
                    diff: tree_diff(rep, &r.gold_tree)
                        .into_iter()
                        .map(|(a, b)| [a.to_string(), b.to_string()])
                        .collect(),
                }
            })
            .collect();
        BatchRecord {
            batch,
            sentence_index,
            sent_id: original.sent_id().map(str::to_string),
            text: original.surface_text(),
            replaced_digits: digits.to_string(),
            original_seg: r.original_seg,
            original_valid: r.original_valid,
            original_correct: r.original_correct,
            excluded: r.excluded(),
            considered: r.considered_count(),
            correct: r.correct_count(),
            consistent_errors: r.consistent_errors,
            variants: (0..r.variant_seg.len())
                .map(|i| VariantRecord {
                    replacement: r.replacements[i],
                    seg: r.variant_seg[i],
                    valid: r.variant_valid[i],
                    correct: r.variant_correct[i],
                })
                .collect(),
            clusters,
            between_cluster_ncptk: r.clusters.pairwise_ncptk.clone(),
            gold_tree: r.gold_tree.to_string(),
        }
    }
}

/// Two decimals with trailing zeros dropped; magnitudes that would round to
/// zero keep one significant digit.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let decimals = if x.abs() < 0.005 {
        (-x.abs().log10().floor()) as usize
    } else {
        2
    };
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        &s
    };
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn fmt_pct(p: Option<f64>) -> String {
    match p {
        Some(p) => {
            let s = format!("{p:.1}");
            s.strip_suffix(".0").map(str::to_string).unwrap_or(s)
        }
        None => "NA".into(),
    }
}

fn fmt_count(c: Option<usize>) -> String {
    c.map_or_else(|| "NA".into(), |c| c.to_string())
}

fn mean_sd(s: &Option<Stats>) -> String {
    s.map_or_else(
        || "NA".into(),
        |s| format!("{} ({})", fmt_num(s.mean), fmt_num(s.sd)),
    )
}

fn median_range(s: &Option<Stats>) -> String {
    s.map_or_else(
        || "NA".into(),
        |s| {
            format!(
                "{} ({} - {})",
                fmt_num(s.median),
                fmt_num(s.min),
                fmt_num(s.max)
            )
        },
    )
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let cols = header.len();
    let mut width = vec![0; cols];
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for r in std::iter::once(header).chain(rows.iter().map(Vec::as_slice)) {
        let mut line = String::new();
        for (i, cell) in r.iter().enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            let pad = width[i] - cell.chars().count();
            line.push_str(cell);
            line.extend(std::iter::repeat_n(' ', pad));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn label(s: &str) -> Vec<String> {
    vec![s.to_string()]
}

/// Parsing summary and the per-group consistency table.
pub fn render_tables(r: &Report) -> String {
    let mut out = String::new();

    let mut header = label("Parsing summary");
    header.extend(r.splits.iter().map(|s| s.split.clone()));
    let mut rows = Vec::new();
    for (title, pick) in [("Original sentences", 0), ("Augmented sentences", 1)] {
        rows.push(label(title));
        let row = |name: &str, f: &dyn Fn(&udconsist_core::SummaryRow) -> String| {
            let mut v = label(&format!("  {name}"));
            v.extend(r.splits.iter().map(|s| {
                f(if pick == 0 {
                    &s.summary.original
                } else {
                    &s.summary.augmented
                })
            }));
            v
        };
        rows.push(row("In total", &|x| x.total.to_string()));
        rows.push(row("Wrong sent. segm.", &|x| {
            x.wrong_segmentation.to_string()
        }));
        rows.push(row("Invalid trees", &|x| x.invalid_tree.to_string()));
        rows.push(row("Considered", &|x| x.considered.to_string()));
        rows.push(row("Corr. parsed sent.", &|x| {
            x.correctly_parsed.to_string()
        }));
        rows.push(row("Corr. parsed sent. (%)", &|x| fmt_pct(x.correct_pct)));
    }
    out.push_str(&table(&header, &rows));
    out.push('\n');

    let groups: Vec<&GroupReport> = r.splits.iter().flat_map(|s| &s.groups).collect();
    let mut header = label("Consistency");
    header.extend(groups.iter().map(|g| {
        let sign = match g.original {
            OriginalClass::Correct => "+",
            OriginalClass::Incorrect => "-",
        };
        format!("{} Original {sign}", g.split)
    }));
    let row = |name: &str, f: &dyn Fn(&GroupReport) -> String| {
        let mut v = label(name);
        v.extend(groups.iter().map(|g| f(g)));
        v
    };
    let rows = vec![
        row("Batches considered", &|g| g.batches_considered.to_string()),
        row("Completely corr. batches", &|g| {
            fmt_count(g.q1_completely_correct)
        }),
        label("Corr. parsed sent. within a batch"),
        row("  Mean (SD)", &|g| mean_sd(&g.q2_correct_per_batch)),
        row("  Median (Min - Max)", &|g| {
            median_range(&g.q2_correct_per_batch)
        }),
        row("Batches with consistent errors", &|g| {
            fmt_count(g.q3_consistent_error_batches)
        }),
        label("Number of error clusters"),
        row("  Mean (SD)", &|g| mean_sd(&g.q4_cluster_count)),
        row("  Median (Min - Max)", &|g| {
            median_range(&g.q4_cluster_count)
        }),
        label("Between-cluster NCPTK"),
        row("  Mean (SD)", &|g| mean_sd(&g.q5_between_cluster_ncptk)),
        row("  Median (Min - Max)", &|g| {
            median_range(&g.q5_between_cluster_ncptk)
        }),
    ];
    out.push_str(&table(&header, &rows));

    let failures: usize = r.splits.iter().map(|s| s.failures.len()).sum();
    if failures > 0 {
        let _ = writeln!(out, "\n{failures} batch(es) failed; see report.json");
    }
    out
}

/// Batches with two or more error clusters, most clusters first: cluster
/// sizes, the numerals in each cluster, and where each representative
/// differs from the gold tree.
pub fn render_clusters(r: &Report) -> String {
    let mut out = String::new();
    for s in &r.splits {
        let mut batches: Vec<&BatchRecord> = s
            .batches
            .iter()
            .filter(|b| !b.excluded && b.clusters.len() >= 2)
            .collect();
        batches.sort_by_key(|b| (std::cmp::Reverse(b.clusters.len()), b.batch));
        for b in batches {
            let id = b.sent_id.as_deref().unwrap_or("-");
            let _ = writeln!(
                out,
                "[{}] batch {} ({id}): {} clusters, original {}",
                s.split,
                b.batch,
                b.clusters.len(),
                if b.original_correct {
                    "correct"
                } else {
                    "incorrect"
                }
            );
            let _ = writeln!(out, "  text: {}", b.text);
            for (k, c) in b.clusters.iter().enumerate() {
                let nums: Vec<String> = c.numerals.iter().map(u32::to_string).collect();
                let _ = writeln!(
                    out,
                    "  cluster {}: {} trees, {}; numerals {}",
                    k + 1,
                    c.members.len(),
                    if c.correct { "correct" } else { "incorrect" },
                    nums.join(", ")
                );
                for [parsed, gold] in &c.diff {
                    let _ = writeln!(out, "    parsed: {parsed}");
                    let _ = writeln!(out, "    gold:   {gold}");
                }
            }
            for p in &b.between_cluster_ncptk {
                let _ = writeln!(
                    out,
                    "  ncptk(cluster {}, cluster {}) = {}",
                    p.first + 1,
                    p.second + 1,
                    fmt_num(p.ncptk)
                );
            }
            out.push('\n');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(49.0), "49");
        assert_eq!(fmt_num(6.1449), "6.14");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(2.0 / 3.0), "0.67");
        assert_eq!(fmt_num(0.0002), "0.0002");
        assert_eq!(fmt_num(0.00049), "0.0005");
        assert_eq!(fmt_num(-0.0), "0");
        assert_eq!(fmt_pct(Some(23.8)), "23.8");
        assert_eq!(fmt_pct(Some(75.0)), "75");
        assert_eq!(fmt_pct(None), "NA");
    }

    #[test]
    fn table_alignment() {
        let t = table(
            &["a".into(), "bb".into()],
            &[vec!["ccc".into(), "d".into()]],
        );
        assert_eq!(t, "a    bb\nccc  d\n");
    }
}
