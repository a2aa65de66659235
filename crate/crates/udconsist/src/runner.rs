//! Drives an external parser over the line-aligned subprocess contract.
//!
//! Input is UTF-8 text with one sentence per line. Output is CoNLL-U in
//! which every sentence carries `# source_line = k` (1-based input line).
//! Output sentences are grouped back onto input lines through that comment;
//! a line the parser produced nothing for gets an empty group.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use udconsist_core::conllu::{parse_conllu_lenient, Sentence};
use udconsist_core::ConlluError;
use wait_timeout::ChildExt;

pub const SOURCE_LINE: &str = "source_line";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputMode {
    Stdin,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputMode {
    Stdout,
    File,
}

/// How to launch the parser. `{input}` and `{output}` in `args` are replaced
/// by temporary file paths and switch the matching mode to `File`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParserSpec {
    pub program: String,
    pub args: Vec<String>,
    pub input_mode: InputMode,
    pub output_mode: OutputMode,
    pub timeout_secs: f64,
    pub env: Vec<(String, String)>,
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("parser command is empty")]
    EmptyCommand,
    #[error("cannot split parser command {0:?}")]
    Quoting(String),
    #[error("parser timeout must be positive, got {0}")]
    Timeout(f64),
    #[error("environment entry {0:?} is not KEY=VALUE")]
    Env(String),
}

impl ParserSpec {
    /// Splits a shell-style command line and infers the IO modes from the
    /// placeholders.
    pub fn from_command_line(cmd: &str, timeout_secs: f64) -> Result<Self, SpecError> {
        let words = shlex::split(cmd).ok_or_else(|| SpecError::Quoting(cmd.to_string()))?;
        let (program, args) = words.split_first().ok_or(SpecError::EmptyCommand)?;
        let uses = |p: &str| args.iter().any(|a| a.contains(p));
        let spec = ParserSpec {
            program: program.clone(),
            args: args.to_vec(),
            input_mode: if uses("{input}") {
                InputMode::File
            } else {
                InputMode::Stdin
            },
            output_mode: if uses("{output}") {
                OutputMode::File
            } else {
                OutputMode::Stdout
            },
            timeout_secs,
            env: Vec::new(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_env(mut self, entries: &[String]) -> Result<Self, SpecError> {
        for e in entries {
            let (k, v) = e.split_once('=').ok_or_else(|| SpecError::Env(e.clone()))?;
            self.env.push((k.to_string(), v.to_string()));
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if self.program.trim().is_empty() {
            return Err(SpecError::EmptyCommand);
        }
        if !(self.timeout_secs > 0.0 && self.timeout_secs.is_finite()) {
            return Err(SpecError::Timeout(self.timeout_secs));
        }
        Ok(())
    }

    /// The command as one shell-quoted string.
    pub fn command_line(&self) -> String {
        let words: Vec<&str> = std::iter::once(self.program.as_str())
            .chain(self.args.iter().map(String::as_str))
            .collect();
        shlex::try_join(words).unwrap_or_else(|_| self.program.clone())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("input line {line} contains a newline")]
    MultilineInput { line: usize },
    #[error("cannot start parser {program:?}: {source}")]
    Spawn {
        program: String,
        source: std::io::Error,
    },
    #[error("i/o error talking to the parser: {0}")]
    Io(#[from] std::io::Error),
    #[error("parser timed out after {secs}s; stderr: {stderr}")]
    Timeout { secs: f64, stderr: String },
    #[error("parser exited with {status}; stderr: {stderr}")]
    Exit { status: String, stderr: String },
    #[error("parser output is not UTF-8: {0}")]
    Utf8(#[from] std::string::FromUtf8Error),
    #[error("parser output is not CoNLL-U: {0}")]
    Conllu(#[from] ConlluError),
    #[error("output sentence {index} has no `# source_line` comment")]
    MissingSourceLine { index: usize },
    #[error("output sentence {index} has source_line {value:?}, expected 1..={lines}")]
    BadSourceLine {
        index: usize,
        value: String,
        lines: usize,
    },
}

/// Raw parser output for one invocation.
pub fn invoke(spec: &ParserSpec, sentences: &[String]) -> Result<String, RunError> {
    if let Some(i) = sentences
        .iter()
        .position(|s| s.contains('\n') || s.contains('\r'))
    {
        return Err(RunError::MultilineInput { line: i + 1 });
    }
    let mut input = sentences.join("\n");
    input.push('\n');

    let dir = tempfile::tempdir()?;
    let in_path = dir.path().join("input.txt");
    let out_path = dir.path().join("output.conllu");
    if spec.input_mode == InputMode::File {
        std::fs::write(&in_path, &input)?;
    }
    let args = spec.args.iter().map(|a| {
        a.replace("{input}", &in_path.to_string_lossy())
            .replace("{output}", &out_path.to_string_lossy())
    });

    let mut child = Command::new(&spec.program)
        .args(args)
        .envs(spec.env.iter().map(|(k, v)| (k, v)))
        .stdin(match spec.input_mode {
            InputMode::Stdin => Stdio::piped(),
            InputMode::File => Stdio::null(),
        })
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|source| RunError::Spawn {
            program: spec.program.clone(),
            source,
        })?;

    let writer = child.stdin.take().map(|mut stdin| {
        thread::spawn(move || {
            // a parser that exits early closes the pipe; its exit status says why
            let _ = stdin.write_all(input.as_bytes());
        })
    });
    let stdout = drain(child.stdout.take());
    let stderr = drain(child.stderr.take());

    let status = child.wait_timeout(Duration::from_secs_f64(spec.timeout_secs))?;
    let Some(status) = status else {
        let _ = child.kill();
        let _ = child.wait();
        return Err(RunError::Timeout {
            secs: spec.timeout_secs,
            stderr: join_text(stderr),
        });
    };
    if let Some(w) = writer {
        let _ = w.join();
    }
    let stdout = stdout.join().unwrap_or_default();
    let stderr = join_text(stderr);
    if !status.success() {
        return Err(RunError::Exit {
            status: status.to_string(),
            stderr,
        });
    }
    let bytes = match spec.output_mode {
        OutputMode::Stdout => stdout,
        OutputMode::File => read_file(&out_path)?,
    };
    Ok(String::from_utf8(bytes)?)
}

fn drain<R: Read + Send + 'static>(pipe: Option<R>) -> thread::JoinHandle<Vec<u8>> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut p) = pipe {
            let _ = p.read_to_end(&mut buf);
        }
        buf
    })
}

fn join_text(h: thread::JoinHandle<Vec<u8>>) -> String {
    String::from_utf8_lossy(&h.join().unwrap_or_default())
        .trim_end()
        .to_string()
}

fn read_file(path: &Path) -> Result<Vec<u8>, RunError> {
    Ok(std::fs::read(path)?)
}

/// Groups parser output by `# source_line`, one group per input line.
///
/// Comment-only blocks (such as a `# model_version` header) are ignored.
pub fn align_output(output: &str, lines: usize) -> Result<Vec<Vec<Sentence>>, RunError> {
    let tb = parse_conllu_lenient(&blank_comment_blocks(output))?;
    let mut groups: BTreeMap<usize, Vec<Sentence>> = BTreeMap::new();
    for (index, s) in tb.sentences.into_iter().enumerate() {
        let value = s
            .comment_value(SOURCE_LINE)
            .ok_or(RunError::MissingSourceLine { index })?;
        let k = value
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|k| (1..=lines).contains(k))
            .ok_or_else(|| RunError::BadSourceLine {
                index,
                value: value.to_string(),
                lines,
            })?;
        groups.entry(k).or_default().push(s);
    }
    Ok((1..=lines)
        .map(|k| groups.remove(&k).unwrap_or_default())
        .collect())
}

/// Replaces blocks made only of comment lines by empty lines, keeping line
/// numbers intact for error messages.
fn blank_comment_blocks(text: &str) -> String {
    let lines: Vec<&str> = text.split('\n').collect();
    let mut keep = vec![true; lines.len()];
    let mut start = 0;
    while start < lines.len() {
        let mut end = start;
        while end < lines.len() && !lines[end].trim().is_empty() {
            end += 1;
        }
        if end > start && lines[start..end].iter().all(|l| l.starts_with('#')) {
            keep[start..end].iter_mut().for_each(|k| *k = false);
        }
        start = end + 1;
    }
    lines
        .iter()
        .zip(&keep)
        .map(|(l, &k)| if k { *l } else { "" })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Invokes the parser and aligns its output.
pub fn run_parser(spec: &ParserSpec, sentences: &[String]) -> Result<Vec<Vec<Sentence>>, RunError> {
    let out = invoke(spec, sentences)?;
    align_output(&out, sentences.len())
}
