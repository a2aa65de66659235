//! Deterministic stand-in for a parser, speaking the line-aligned contract.
//!
//! Reads one sentence per line and answers from a CoNLL-U table. A table
//! sentence applies to an input line when its `# mock_template` equals the
//! line with its year digits replaced by `NNNN`, and, if `# mock_lines` is
//! present, the 1-based line number is listed there. Matching entries are
//! emitted in table order with `NNNN` forms and lemmas filled back in.
//! Lines without a match produce no output.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use udconsist::core::conllu::{parse_conllu_lenient, serialize_conllu, Sentence, Treebank};
use udconsist::core::find_year_numerals;
use udconsist::runner::SOURCE_LINE;

const SLOT: &str = "NNNN";

#[derive(Debug, Parser)]
struct Args {
    /// CoNLL-U answer table
    #[arg(long)]
    table: Option<PathBuf>,
    /// Read input from this file instead of stdin
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write output to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print this to stderr and exit with `--exit-code`
    #[arg(long)]
    fail: Option<String>,
    /// Like `--fail`, but only when some input line contains this text
    #[arg(long)]
    fail_on: Option<String>,
    #[arg(long, default_value_t = 1)]
    exit_code: u8,
    /// Sleep before answering
    #[arg(long, default_value_t = 0)]
    sleep_ms: u64,
    /// Header comment block to emit first
    #[arg(long)]
    model_version: Option<String>,
}

/// The line with every space-delimited occurrence of its first year
/// numeral replaced by the slot, plus those digits.
fn template(line: &str) -> (String, Option<String>) {
    let matches = find_year_numerals(line);
    let Some(first) = matches.first() else {
        return (line.to_string(), None);
    };
    let digits = first.digits.clone();
    let mut out = String::new();
    let mut last = 0;
    for m in matches.iter().filter(|m| m.digits == digits) {
        out.push_str(&line[last..m.start]);
        out.push_str(SLOT);
        last = m.end;
    }
    out.push_str(&line[last..]);
    (out, Some(digits))
}

fn applies(entry: &Sentence, tmpl: &str, k: usize) -> bool {
    entry.comment_value("mock_template") == Some(tmpl)
        && entry
            .comment_value("mock_lines")
            .is_none_or(|v| v.split(',').any(|n| n.trim().parse::<usize>() == Ok(k)))
}

fn answer(entry: &Sentence, line: &str, digits: Option<&str>, k: usize) -> Sentence {
    let mut s = entry.clone();
    s.comments.retain(|c| !c.starts_with("# mock_"));
    if let Some(d) = digits {
        for t in &mut s.tokens {
            if t.form == SLOT {
                t.form = d.to_string();
            }
            if t.lemma == SLOT {
                t.lemma = d.to_string();
            }
        }
    }
    s.set_comment_value("text", line);
    s.set_comment_value(SOURCE_LINE, &k.to_string());
    s
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.sleep_ms > 0 {
        std::thread::sleep(Duration::from_millis(args.sleep_ms));
    }
    let mut input = String::new();
    let read = match &args.input {
        Some(p) => std::fs::read_to_string(p).map(|s| input = s),
        None => std::io::stdin().read_to_string(&mut input).map(drop),
    };
    if let Err(e) = read {
        eprintln!("mock-parser: cannot read input: {e}");
        return ExitCode::from(1);
    }
    if let Some(msg) = &args.fail {
        eprintln!("{msg}");
        return ExitCode::from(args.exit_code);
    }
    if let Some(needle) = &args.fail_on {
        if input.lines().any(|l| l.contains(needle.as_str())) {
            eprintln!("mock-parser: refusing input containing {needle:?}");
            return ExitCode::from(args.exit_code);
        }
    }
    let table = match &args.table {
        Some(p) => match std::fs::read_to_string(p).map(|t| parse_conllu_lenient(&t)) {
            Ok(Ok(tb)) => tb.sentences,
            Ok(Err(e)) => {
                eprintln!("mock-parser: {}: {e}", p.display());
                return ExitCode::from(1);
            }
            Err(e) => {
                eprintln!("mock-parser: {}: {e}", p.display());
                return ExitCode::from(1);
            }
        },
        None => Vec::new(),
    };

    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let (tmpl, digits) = template(line);
        out.extend(
            table
                .iter()
                .filter(|e| applies(e, &tmpl, i + 1))
                .map(|e| answer(e, line, digits.as_deref(), i + 1)),
        );
    }
    let mut text = String::new();
    if let Some(v) = &args.model_version {
        text.push_str(&format!("# model_version = {v}\n\n"));
    }
    text.push_str(&serialize_conllu(&Treebank::new("", out)));
    let written = match &args.output {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mock-parser: cannot write output: {e}");
            ExitCode::from(1)
        }
    }
}
