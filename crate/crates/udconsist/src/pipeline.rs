//! The `evaluate` and `augment` workflows.
//!
//! Output directory layout for `evaluate`:
//!
//! ```text
//! manifest.json
//! batches/<split>/<batch>.txt     parser input, one sentence per line
//! raw/<split>/<batch>.conllu      parser output as received
//! report.json  report.txt  clusters.txt
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use udconsist_core::conllu::parse_conllu_lenient;
use udconsist_core::numeral::has_year_numeral;
use udconsist_core::{
    aggregate, analyze_batch, augment_treebank, build_dep_tree, parse_conllu, sample_eval_numbers,
    sample_training_numbers, serialize_conllu, substitute_tokens, summarize, synthesize_batch,
    AugmentedBatch, ConlluError, Sentence, Treebank,
};

use crate::config::{Config, ConfigError};
use crate::manifest::{unix_now, InputRecord, RunManifest, TOOL_VERSION};
use crate::report::{
    render_clusters, render_tables, BatchFailure, BatchRecord, Report, SkippedSentence, SplitReport,
};
use crate::runner::{align_output, invoke, ParserSpec, RunError};

/// `SPLIT=PATH`, or a bare path whose file stem names the split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreebankInput {
    pub split: String,
    pub path: PathBuf,
}

impl FromStr for TreebankInput {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.is_empty() {
            return Err("empty treebank argument".into());
        }
        if let Some((split, path)) = s.split_once('=') {
            if split.is_empty() || path.is_empty() {
                return Err(format!("expected SPLIT=PATH, got {s:?}"));
            }
            return Ok(TreebankInput {
                split: split.to_string(),
                path: path.into(),
            });
        }
        let path = PathBuf::from(s);
        let split = path
            .file_stem()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| s.to_string());
        Ok(TreebankInput { split, path })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot read {}: {source}", path.display())]
    Input {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Malformed { path: PathBuf, source: ConlluError },
    #[error("duplicate split name {0:?}")]
    DuplicateSplit(String),
    #[error("{} already exists; pass --force to overwrite", .0.display())]
    Exists(PathBuf),
    #[error("sampling: {0}")]
    Sampling(udconsist_core::Error),
    #[error("{0}")]
    Augment(udconsist_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("all {count} batches failed; first: {first}")]
    AllFailed { count: usize, first: String },
}

impl PipelineError {
    /// 2 for problems with the request itself, 1 for failures while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Output { .. }
            | PipelineError::AllFailed { .. }
            | PipelineError::Augment(_) => 1,
            _ => 2,
        }
    }
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), PipelineError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|source| PipelineError::Output {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    fs::write(path, contents).map_err(|source| PipelineError::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn read_treebank(path: &Path, strict: bool) -> Result<Treebank, PipelineError> {
    let text = fs::read_to_string(path).map_err(|source| PipelineError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    let parsed = if strict {
        parse_conllu(&text)
    } else {
        parse_conllu_lenient(&text)
    };
    let mut tb = parsed.map_err(|source| PipelineError::Malformed {
        path: path.to_path_buf(),
        source,
    })?;
    tb.source_name = path.display().to_string();
    Ok(tb)
}

pub struct EvaluateOptions {
    pub treebanks: Vec<TreebankInput>,
    pub out: PathBuf,
    pub config: Config,
    pub parser: ParserSpec,
    pub force: bool,
    /// Reuse raw parser output from an earlier run when the batch input is
    /// unchanged.
    pub reuse_raw: bool,
}

struct Job {
    split: usize,
    batch: usize,
    sentence_index: usize,
    augmented: AugmentedBatch,
    lines: Vec<String>,
    input_path: PathBuf,
    raw_path: PathBuf,
}

pub fn evaluate(opts: &EvaluateOptions) -> Result<Report, PipelineError> {
    let cfg = &opts.config;
    cfg.validate()?;
    let report_path = opts.out.join("report.json");
    if report_path.exists() && !opts.force {
        return Err(PipelineError::Exists(report_path));
    }
    let mut seen = BTreeSet::new();
    for t in &opts.treebanks {
        if !seen.insert(t.split.as_str()) {
            return Err(PipelineError::DuplicateSplit(t.split.clone()));
        }
    }
    let treebanks = opts
        .treebanks
        .iter()
        .map(|t| read_treebank(&t.path, false))
        .collect::<Result<Vec<_>, _>>()?;
    let numbers = sample_eval_numbers(&cfg.sampling).map_err(PipelineError::Sampling)?;

    let manifest = RunManifest {
        tool_version: TOOL_VERSION.to_string(),
        command: "evaluate".into(),
        sampling: cfg.sampling.clone(),
        kernel: cfg.kernel,
        parser: Some(opts.parser.clone()),
        workers: cfg.workers,
        mode: None,
        token: None,
        inputs: opts
            .treebanks
            .iter()
            .map(|t| InputRecord {
                split: t.split.clone(),
                path: t.path.display().to_string(),
            })
            .collect(),
        output: opts.out.display().to_string(),
        eval_numbers: numbers.clone(),
        train_numbers: None,
        started_unix: unix_now(),
    };
    write(&opts.out.join("manifest.json"), manifest.to_json())?;

    let mut splits = Vec::new();
    let mut jobs = Vec::new();
    for (si, (input, tb)) in opts.treebanks.iter().zip(&treebanks).enumerate() {
        let mut skipped_gold = Vec::new();
        for (i, s) in tb.sentences.iter().enumerate() {
            if let Err(e) = build_dep_tree(s) {
                log::warn!("{}: sentence {} skipped: {e}", input.split, i + 1);
                skipped_gold.push(SkippedSentence {
                    sentence_index: i,
                    sent_id: s.sent_id().map(str::to_string),
                    error: e.to_string(),
                });
                continue;
            }
            if !has_year_numeral(s) {
                continue;
            }
            let augmented = synthesize_batch(s, &numbers).map_err(PipelineError::Augment)?;
            let mut lines = vec![s.surface_text()];
            lines.extend(augmented.variants.iter().map(|v| v.text.clone()));
            let batch = jobs.iter().filter(|j: &&Job| j.split == si).count();
            let name = format!("{batch:05}");
            jobs.push(Job {
                split: si,
                batch,
                sentence_index: i,
                augmented,
                lines,
                input_path: opts
                    .out
                    .join("batches")
                    .join(&input.split)
                    .join(format!("{name}.txt")),
                raw_path: opts
                    .out
                    .join("raw")
                    .join(&input.split)
                    .join(format!("{name}.conllu")),
            });
        }
        splits.push(SplitReport {
            split: input.split.clone(),
            treebank: input.path.display().to_string(),
            sentences: tb.len(),
            skipped_gold,
            summary: summarize(&[], &input.split),
            groups: Vec::new(),
            batches: Vec::new(),
            failures: Vec::new(),
        });
    }

    // batch inputs; note which raw outputs can be reused
    let mut reusable = Vec::with_capacity(jobs.len());
    for j in &jobs {
        let mut text = j.lines.join("\n");
        text.push('\n');
        let unchanged = fs::read_to_string(&j.input_path).is_ok_and(|old| old == text);
        reusable.push(opts.reuse_raw && unchanged && j.raw_path.exists());
        write(&j.input_path, text)?;
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| PipelineError::Output {
            path: opts.out.clone(),
            source: std::io::Error::other(e),
        })?;
    let outputs: Vec<Result<String, RunError>> = pool.install(|| {
        jobs.par_iter()
            .zip(&reusable)
            .map(|(j, &reuse)| {
                if reuse {
                    fs::read_to_string(&j.raw_path).map_err(RunError::from)
                } else {
                    invoke(&opts.parser, &j.lines)
                }
            })
            .collect()
    });

    let mut results = vec![Vec::new(); splits.len()];
    for ((j, out), reused) in jobs.iter().zip(outputs).zip(reusable) {
        let split = &mut splits[j.split];
        let original = &j.augmented.original;
        let fail = |e: String| BatchFailure {
            batch: j.batch,
            sentence_index: j.sentence_index,
            sent_id: original.sent_id().map(str::to_string),
            error: e,
        };
        let raw = match out {
            Ok(raw) => raw,
            Err(e) => {
                split.failures.push(fail(e.to_string()));
                continue;
            }
        };
        if !reused {
            write(&j.raw_path, &raw)?;
        }
        let analyzed = align_output(&raw, j.lines.len())
            .map_err(|e| e.to_string())
            .and_then(|groups| {
                analyze_batch(&j.augmented, &groups[0], &groups[1..], &cfg.kernel)
                    .map_err(|e| e.to_string())
            });
        match analyzed {
            Ok(r) => {
                split.batches.push(BatchRecord::new(
                    j.batch,
                    j.sentence_index,
                    original,
                    &j.augmented.replaced_digits,
                    &r,
                ));
                results[j.split].push(r);
            }
            Err(e) => split.failures.push(fail(e)),
        }
    }
    for (split, res) in splits.iter_mut().zip(&results) {
        split.summary = summarize(res, &split.split);
        split.groups = aggregate(res, &split.split).to_vec();
    }

    let report = Report {
        tool_version: TOOL_VERSION.to_string(),
        sampling: cfg.sampling.clone(),
        kernel: cfg.kernel,
        eval_numbers: numbers,
        splits,
    };
    write_report(&report, &opts.out)?;

    let failed: Vec<&BatchFailure> = report.splits.iter().flat_map(|s| &s.failures).collect();
    if !jobs.is_empty() && failed.len() == jobs.len() {
        return Err(PipelineError::AllFailed {
            count: jobs.len(),
            first: failed[0].error.clone(),
        });
    }
    Ok(report)
}

pub fn report_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Writes `report.json`, `report.txt` and `clusters.txt` into `dir`.
pub fn write_report(report: &Report, dir: &Path) -> Result<(), PipelineError> {
    write(&dir.join("report.json"), report_json(report))?;
    write(&dir.join("report.txt"), render_tables(report))?;
    write(&dir.join("clusters.txt"), render_clusters(report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AugmentMode {
    /// Add one copy of each year-bearing sentence per training numeral.
    Numeral,
    /// Replace the year numeral with a placeholder token in place.
    Token,
}

pub struct AugmentOptions {
    pub input: PathBuf,
    pub output: PathBuf,
    pub mode: AugmentMode,
    pub config: Config,
    pub force: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentOutcome {
    pub sentences_in: usize,
    pub sentences_out: usize,
    pub manifest: PathBuf,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Builds an augmented (or placeholder-substituted) copy of a treebank.
pub fn augment(opts: &AugmentOptions) -> Result<AugmentOutcome, PipelineError> {
    let cfg = &opts.config;
    cfg.validate()?;
    if opts.output.exists() && !opts.force {
        return Err(PipelineError::Exists(opts.output.clone()));
    }
    let tb = read_treebank(&opts.input, true)?;
    let eval_numbers = sample_eval_numbers(&cfg.sampling).map_err(PipelineError::Sampling)?;
    let (out, train_numbers, token) = match opts.mode {
        AugmentMode::Numeral => {
            let exclude: BTreeSet<u32> = eval_numbers.iter().copied().collect();
            let train = sample_training_numbers(&cfg.sampling, &exclude)
                .map_err(PipelineError::Sampling)?;
            let out = augment_treebank(&tb, &train).map_err(PipelineError::Augment)?;
            (out, Some(train), None)
        }
        AugmentMode::Token => {
            let out = substitute_tokens(&tb, &cfg.token)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            (out, None, Some(cfg.token.clone()))
        }
    };

    let manifest = manifest_path(&opts.output);
    let m = RunManifest {
        tool_version: TOOL_VERSION.to_string(),
        command: "augment".into(),
        sampling: cfg.sampling.clone(),
        kernel: cfg.kernel,
        parser: None,
        workers: cfg.workers,
        mode: Some(
            match opts.mode {
                AugmentMode::Numeral => "numeral",
                AugmentMode::Token => "token",
            }
            .into(),
        ),
        token,
        inputs: vec![InputRecord {
            split: String::new(),
            path: opts.input.display().to_string(),
        }],
        output: opts.output.display().to_string(),
        eval_numbers,
        train_numbers,
        started_unix: unix_now(),
    };
    write(&manifest, m.to_json())?;
    write(&opts.output, serialize_conllu(&out))?;
    Ok(AugmentOutcome {
        sentences_in: tb.len(),
        sentences_out: out.len(),
        manifest,
    })
}

/// Sentences of a CoNLL-U file, for the kernel command.
pub fn read_sentences(path: &Path) -> Result<Vec<Sentence>, PipelineError> {
    Ok(read_treebank(path, false)?.sentences)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn treebank_argument() {
        let t: TreebankInput = "dev=a/b.conllu".parse().unwrap();
        assert_eq!(
            (t.split.as_str(), t.path.as_path()),
            ("dev", Path::new("a/b.conllu"))
        );
        let t: TreebankInput = "x/en_ewt-ud-train.conllu".parse().unwrap();
        assert_eq!(t.split, "en_ewt-ud-train");
        assert!("=x".parse::<TreebankInput>().is_err());
        assert!("".parse::<TreebankInput>().is_err());
    }

    #[test]
    fn manifest_next_to_output() {
        assert_eq!(
            manifest_path(Path::new("out/aug.conllu")),
            Path::new("out/aug.conllu.manifest.json")
        );
    }
}
