//! Command-line interface.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use udconsist_core::kernel::ORACLE_MAX_NODES;
use udconsist_core::{build_dep_tree, ncptk, ptk, ptk_oracle, to_grct, GrctTree, LexMode};

use crate::config::{Config, ConfigError};
use crate::manifest::RunManifest;
use crate::pipeline::{self, AugmentMode, AugmentOptions, EvaluateOptions, TreebankInput};
use crate::report::{render_clusters, render_tables, Report};
use crate::runner::ParserSpec;

#[derive(Debug, Parser)]
#[command(
    name = "udconsist",
    version,
    about = "Parser consistency under numeral substitution"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse original and numeral-substituted sentences and report consistency.
    Evaluate(EvaluateArgs),
    /// Write an augmented or placeholder-substituted treebank.
    Augment(AugmentArgs),
    /// Print the partial tree kernel of two trees.
    Kernel(KernelArgs),
    /// Re-render the text reports of a report.json.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SettingsArgs {
    /// key = value file applied before the flags below
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub eval_seed: Option<u64>,
    #[arg(long)]
    pub train_seed: Option<u64>,
    #[arg(long)]
    pub eval_count: Option<usize>,
    #[arg(long)]
    pub train_count: Option<usize>,
    #[arg(long)]
    pub oversample: Option<usize>,
    /// Smallest replacement numeral
    #[arg(long)]
    pub lo: Option<u32>,
    /// Replacement numerals stay below this value
    #[arg(long)]
    pub hi: Option<u32>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Placeholder for `augment --mode token`
    #[arg(long)]
    pub token: Option<String>,
    /// Parser processes run at once
    #[arg(long)]
    pub workers: Option<usize>,
}

impl SettingsArgs {
    /// Defaults (or `base`), then the config file, then flags.
    pub fn resolve(&self, base: Config) -> Result<Config, ConfigError> {
        let mut c = base;
        if let Some(path) = &self.config {
            c.apply_file(path)?;
        }
        let s = &mut c.sampling;
        macro_rules! set {
            ($($flag:ident => $dst:expr),* $(,)?) => {
                $(if let Some(v) = self.$flag.clone() { $dst = v; })*
            };
        }
        set!(
            eval_seed => s.eval_seed,
            train_seed => s.train_seed,
            eval_count => s.eval_count,
            train_count => s.train_count,
            oversample => s.oversample,
            lo => s.lo,
            hi => s.hi,
            lambda => c.kernel.lambda,
            mu => c.kernel.mu,
            tolerance => c.kernel.tolerance,
            token => c.token,
            workers => c.workers,
        );
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Treebank to evaluate, as SPLIT=PATH or PATH; repeatable
    #[arg(long = "treebank", value_name = "[SPLIT=]PATH")]
    pub treebanks: Vec<TreebankInput>,
    /// Parser command line; `{input}`/`{output}` switch to file IO
    #[arg(long)]
    pub parser_cmd: Option<String>,
    /// Seconds allowed per parser invocation
    #[arg(long)]
    pub parser_timeout: Option<f64>,
    /// Extra KEY=VALUE environment for the parser; repeatable
    #[arg(long)]
    pub parser_env: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
    /// Overwrite an existing report
    #[arg(long)]
    pub force: bool,
    /// Reuse raw parser output of an earlier run in the same directory
    #[arg(long)]
    pub reuse_raw: bool,
    /// Take settings, treebanks and parser from an earlier run's manifest
    #[arg(long)]
    pub replay: Option<PathBuf>,
    #[command(flatten)]
    pub settings: SettingsArgs,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[arg(long)]
    pub treebank: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = AugmentMode::Numeral)]
    pub mode: AugmentMode,
    /// Overwrite an existing output file
    #[arg(long)]
    pub force: bool,
    #[command(flatten)]
    pub settings: SettingsArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LexArg {
    Form,
    Feats,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Bracketed tree, or CONLLU[:N] for the N-th sentence (default 1)
    pub first: String,
    /// Second tree; when omitted, `first` must be a file and its first two
    /// sentences are compared
    pub second: Option<String>,
    /// What the leaves of trees built from CoNLL-U hold
    #[arg(long, value_enum, default_value_t = LexArg::Feats)]
    pub lex: LexArg,
    /// Also print the brute-force kernel value
    #[arg(long)]
    pub oracle: bool,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A report.json written by `evaluate`
    pub input: PathBuf,
    /// Print the cluster listing instead of the tables
    #[arg(long)]
    pub clusters: bool,
}

/// A failed command: message and process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn config(e: impl std::fmt::Display) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

impl From<pipeline::PipelineError> for Failure {
    fn from(e: pipeline::PipelineError) -> Self {
        Failure {
            code: e.exit_code(),
            message: e.to_string(),
        }
    }
}

pub fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Evaluate(a) => evaluate(a),
        Command::Augment(a) => augment(a),
        Command::Kernel(a) => kernel(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn evaluate(a: EvaluateArgs) -> Result<(), Failure> {
    let replay = a
        .replay
        .as_deref()
        .map(|p| {
            RunManifest::read(p)
                .map_err(|e| Failure::config(format!("cannot read manifest {}: {e}", p.display())))
        })
        .transpose()?;
    let mut base = Config::default();
    let mut treebanks = a.treebanks.clone();
    let mut parser = None;
    if let Some(m) = &replay {
        base.sampling = m.sampling.clone();
        base.kernel = m.kernel;
        base.workers = m.workers;
        if treebanks.is_empty() {
            treebanks = m
                .inputs
                .iter()
                .map(|i| TreebankInput {
                    split: i.split.clone(),
                    path: i.path.clone().into(),
                })
                .collect();
        }
        parser = m.parser.clone();
    }
    let mut config = a.settings.resolve(base).map_err(Failure::config)?;
    if let Some(cmd) = &a.parser_cmd {
        config.parser_cmd = Some(cmd.clone());
    }
    if let Some(t) = a.parser_timeout {
        config.parser_timeout = t;
    }
    config.parser_env.extend(a.parser_env.iter().cloned());
    config.validate().map_err(Failure::config)?;

    let parser = match (&config.parser_cmd, parser) {
        (Some(cmd), _) => ParserSpec::from_command_line(cmd, config.parser_timeout)
            .and_then(|s| s.with_env(&config.parser_env))
            .map_err(Failure::config)?,
        (None, Some(p)) => p,
        (None, None) => return Err(Failure::config("no parser given; use --parser-cmd")),
    };
    if treebanks.is_empty() {
        return Err(Failure::config("no treebank given; use --treebank"));
    }
    for t in &treebanks {
        if !t.path.is_file() {
            return Err(Failure::config(format!(
                "treebank {} does not exist",
                t.path.display()
            )));
        }
    }

    let report = pipeline::evaluate(&EvaluateOptions {
        treebanks,
        out: a.out.clone(),
        config,
        parser,
        force: a.force,
        reuse_raw: a.reuse_raw,
    })?;
    for split in &report.splits {
        for f in &split.failures {
            eprintln!(
                "warning: {} batch {} (sentence {}{}) failed: {}",
                split.split,
                f.batch,
                f.sentence_index + 1,
                f.sent_id
                    .as_deref()
                    .map(|id| format!(", {id}"))
                    .unwrap_or_default(),
                f.error
            );
        }
    }
    print!("{}", render_tables(&report));
    eprintln!("reports written to {}", a.out.display());
    Ok(())
}

fn augment(a: AugmentArgs) -> Result<(), Failure> {
    let config = a
        .settings
        .resolve(Config::default())
        .map_err(Failure::config)?;
    if !a.treebank.is_file() {
        return Err(Failure::config(format!(
            "treebank {} does not exist",
            a.treebank.display()
        )));
    }
    let outcome = pipeline::augment(&AugmentOptions {
        input: a.treebank,
        output: a.out.clone(),
        mode: a.mode,
        config,
        force: a.force,
    })?;
    println!(
        "{} sentences in, {} out; wrote {} and {}",
        outcome.sentences_in,
        outcome.sentences_out,
        a.out.display(),
        outcome.manifest.display()
    );
    Ok(())
}

fn load_tree(arg: &str, index_default: usize, lex: LexMode) -> Result<GrctTree, Failure> {
    if arg.trim_start().starts_with('(') {
        return GrctTree::from_bracketed(arg).map_err(|e| Failure::config(format!("{arg:?}: {e}")));
    }
    let (path, index) = split_index(arg, index_default);
    let sentences = pipeline::read_sentences(Path::new(path))?;
    let s = sentences
        .get(index)
        .ok_or_else(|| Failure::config(format!("{path} has no sentence {}", index + 1)))?;
    let t = build_dep_tree(s)
        .map_err(|e| Failure::config(format!("{path} sentence {}: {e}", index + 1)))?;
    Ok(to_grct(&t, lex))
}

/// `file.conllu:3` names the third sentence; a path without a numeric
/// suffix uses `default` (0-based).
fn split_index(arg: &str, default: usize) -> (&str, usize) {
    if let Some((path, n)) = arg.rsplit_once(':') {
        if let Ok(n) = n.parse::<usize>() {
            if n >= 1 && !Path::new(arg).exists() {
                return (path, n - 1);
            }
        }
    }
    (arg, default)
}

fn kernel(a: KernelArgs) -> Result<(), Failure> {
    let mut c = Config::default();
    if let Some(path) = &a.config {
        c.apply_file(path).map_err(Failure::config)?;
    }
    let p = &mut c.kernel;
    if let Some(v) = a.lambda {
        p.lambda = v;
    }
    if let Some(v) = a.mu {
        p.mu = v;
    }
    if let Some(v) = a.tolerance {
        p.tolerance = v;
    }
    p.validate().map_err(Failure::config)?;
    let lex = match a.lex {
        LexArg::Form => LexMode::Form,
        LexArg::Feats => LexMode::Feats,
    };
    let (x, y) = match &a.second {
        Some(b) => (load_tree(&a.first, 0, lex)?, load_tree(b, 0, lex)?),
        None => (load_tree(&a.first, 0, lex)?, load_tree(&a.first, 1, lex)?),
    };
    let k = ptk(&x, &y, p);
    let n = ncptk(&x, &y, p).map_err(Failure::config)?;
    println!("K = {k}");
    println!("NCPTK = {n}");
    if a.oracle {
        let o = ptk_oracle(&x, &y, p).map_err(|e| {
            Failure::config(format!(
                "{e}; --oracle handles at most {ORACLE_MAX_NODES} nodes"
            ))
        })?;
        println!("oracle K = {o}");
    }
    Ok(())
}

fn report(a: ReportArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", a.input.display())))?;
    let r: Report = serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("{}: {e}", a.input.display())))?;
    if a.clusters {
        print!("{}", render_clusters(&r));
    } else {
        print!("{}", render_tables(&r));
    }
    Ok(())
}
