//! CoNLL-U treebanks: data model, reader and writer.
//!
//! The reader keeps every line it sees. Comments, word lines, multiword
//! token ranges (`1-2`) and empty nodes (`1.1`) are stored so that
//! [`serialize_conllu`] reproduces well-formed input byte for byte. Only
//! word lines become [`Token`]s; range and empty-node lines are kept
//! verbatim as [`ExtraLine`]s anchored to the word that follows them.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::deptree::build_dep_tree;
use crate::error::ConlluError;

/// One word line.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub id: usize,
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    pub head: usize,
    pub deprel: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    /// A token with the given core columns and `_` everywhere else.
    pub fn new(id: usize, form: &str, upos: &str, head: usize, deprel: &str) -> Self {
        Token {
            id,
            form: form.to_string(),
            lemma: form.to_string(),
            upos: upos.to_string(),
            xpos: "_".to_string(),
            feats: "_".to_string(),
            head,
            deprel: deprel.to_string(),
            deps: "_".to_string(),
            misc: "_".to_string(),
        }
    }

    pub fn with_feats(mut self, feats: &str) -> Self {
        self.feats = feats.to_string();
        self
    }

    pub fn with_lemma(mut self, lemma: &str) -> Self {
        self.lemma = lemma.to_string();
        self
    }

    pub fn with_misc(mut self, misc: &str) -> Self {
        self.misc = misc.to_string();
        self
    }

    /// `true` unless MISC carries `SpaceAfter=No`.
    pub fn space_after(&self) -> bool {
        !self.misc.split('|').any(|f| f == "SpaceAfter=No")
    }

    fn write_line(&self, out: &mut String) {
        let id = self.id.to_string();
        let head = self.head.to_string();
        let cols: [&str; 10] = [
            &id,
            &self.form,
            &self.lemma,
            &self.upos,
            &self.xpos,
            &self.feats,
            &head,
            &self.deprel,
            &self.deps,
            &self.misc,
        ];
        for (i, col) in cols.iter().enumerate() {
            if i > 0 {
                out.push('\t');
            }
            out.push_str(col);
        }
        out.push('\n');
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtraKind {
    /// `n-m` multiword token range.
    MultiWord,
    /// `n.k` empty node.
    EmptyNode,
}

/// A non-word line kept verbatim.
///
/// `anchor` is the index into [`Sentence::tokens`] of the word line the
/// extra line precedes; `anchor == tokens.len()` places it after the last
/// word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtraLine {
    pub kind: ExtraKind,
    pub anchor: usize,
    pub line: String,
}

impl ExtraLine {
    /// Word id range covered by a multiword token.
    pub fn range(&self) -> Option<(usize, usize)> {
        if self.kind != ExtraKind::MultiWord {
            return None;
        }
        let id = self.line.split('\t').next()?;
        let (a, b) = id.split_once('-')?;
        Some((a.parse().ok()?, b.parse().ok()?))
    }

    pub fn form(&self) -> Option<&str> {
        self.line.split('\t').nth(1)
    }

    pub fn misc(&self) -> Option<&str> {
        self.line.split('\t').nth(9)
    }
}

/// One sentence: comments, word tokens and verbatim extra lines.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Sentence {
    /// Full comment lines, including the leading `#`.
    pub comments: Vec<String>,
    pub tokens: Vec<Token>,
    pub extra_lines: Vec<ExtraLine>,
}

impl Sentence {
    pub fn from_tokens(tokens: Vec<Token>) -> Self {
        Sentence {
            comments: Vec::new(),
            tokens,
            extra_lines: Vec::new(),
        }
    }

    /// Value of a `# key = value` comment.
    pub fn comment_value(&self, key: &str) -> Option<&str> {
        self.comments.iter().find_map(|c| comment_kv(c, key))
    }

    /// Replaces the value of `# key = ...`, or appends the comment when absent.
    pub fn set_comment_value(&mut self, key: &str, value: &str) {
        let line = format!("# {key} = {value}");
        match self
            .comments
            .iter_mut()
            .find(|c| comment_kv(c, key).is_some())
        {
            Some(c) => *c = line,
            None => self.comments.push(line),
        }
    }

    pub fn text(&self) -> Option<&str> {
        self.comment_value("text")
    }

    pub fn sent_id(&self) -> Option<&str> {
        self.comment_value("sent_id")
    }

    /// The surface string: the `# text` comment when present, otherwise
    /// rebuilt from word forms (multiword tokens contributing their own form)
    /// honouring `SpaceAfter=No`.
    pub fn surface_text(&self) -> String {
        if let Some(t) = self.text() {
            return t.to_string();
        }
        let mut out = String::new();
        for unit in self.surface_units() {
            out.push_str(unit.form);
            if unit.space_after {
                out.push(' ');
            }
        }
        let trimmed = out.trim_end().len();
        out.truncate(trimmed);
        out
    }

    /// Surface tokens in order: multiword ranges replace the words they cover.
    pub fn surface_units(&self) -> Vec<SurfaceUnit<'_>> {
        let mut units = Vec::with_capacity(self.tokens.len());
        let mut covered_until = 0usize;
        for (idx, tok) in self.tokens.iter().enumerate() {
            for extra in self.extra_lines.iter().filter(|e| e.anchor == idx) {
                if let (Some((a, b)), Some(form)) = (extra.range(), extra.form()) {
                    if a == tok.id && b >= a {
                        covered_until = b;
                        units.push(SurfaceUnit {
                            form,
                            token: None,
                            space_after: !extra
                                .misc()
                                .is_some_and(|m| m.split('|').any(|f| f == "SpaceAfter=No")),
                        });
                    }
                }
            }
            if tok.id > covered_until {
                units.push(SurfaceUnit {
                    form: &tok.form,
                    token: Some(idx),
                    space_after: tok.space_after(),
                });
            }
        }
        units
    }

    fn write(&self, out: &mut String) {
        for c in &self.comments {
            out.push_str(c);
            out.push('\n');
        }
        let mut extras = self.extra_lines.iter().peekable();
        for (idx, tok) in self.tokens.iter().enumerate() {
            while let Some(e) = extras.next_if(|e| e.anchor <= idx) {
                out.push_str(&e.line);
                out.push('\n');
            }
            tok.write_line(out);
        }
        for e in extras {
            out.push_str(&e.line);
            out.push('\n');
        }
        out.push('\n');
    }
}

/// A surface token; `token` indexes [`Sentence::tokens`] for plain words and
/// is `None` for multiword ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceUnit<'a> {
    pub form: &'a str,
    pub token: Option<usize>,
    pub space_after: bool,
}

fn comment_kv<'a>(comment: &'a str, key: &str) -> Option<&'a str> {
    let rest = comment.strip_prefix('#')?.trim_start();
    let rest = rest.strip_prefix(key)?;
    let rest = rest.trim_start();
    let value = rest.strip_prefix('=')?;
    Some(value.strip_prefix(' ').unwrap_or(value))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Treebank {
    pub sentences: Vec<Sentence>,
    pub source_name: String,
}

impl Treebank {
    pub fn new(source_name: &str, sentences: Vec<Sentence>) -> Self {
        Treebank {
            sentences,
            source_name: source_name.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Parses and validates a treebank: every sentence must form a single
/// rooted, acyclic tree.
pub fn parse_conllu(text: &str) -> Result<Treebank, ConlluError> {
    let tb = parse_conllu_lenient(text)?;
    for (i, s) in tb.sentences.iter().enumerate() {
        if let Err(source) = build_dep_tree(s) {
            return Err(ConlluError::Invalid {
                sentence: i,
                source,
            });
        }
    }
    Ok(tb)
}

/// Parses the line structure only. Tree-level problems (several roots,
/// cycles, dangling heads) are left for [`build_dep_tree`] to report per
/// sentence, which is what parser output needs.
pub fn parse_conllu_lenient(text: &str) -> Result<Treebank, ConlluError> {
    let mut sentences = Vec::new();
    let mut current = Sentence::default();
    let mut started = false;
    let mut last_line = 0;

    for (i, raw) in text.split('\n').enumerate() {
        let lineno = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if started {
                finish(&mut sentences, &mut current, lineno)?;
                started = false;
            }
            continue;
        }
        started = true;
        last_line = lineno;
        if line.starts_with('#') {
            if !current.tokens.is_empty() || !current.extra_lines.is_empty() {
                return Err(ConlluError::MisplacedComment { line: lineno });
            }
            current.comments.push(line.to_string());
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(ConlluError::ColumnCount {
                line: lineno,
                found: cols.len(),
            });
        }
        let id = cols[0];
        if id.contains('-') || id.contains('.') {
            let kind = if id.contains('-') {
                ExtraKind::MultiWord
            } else {
                ExtraKind::EmptyNode
            };
            check_compound_id(id, lineno)?;
            current.extra_lines.push(ExtraLine {
                kind,
                anchor: current.tokens.len(),
                line: line.to_string(),
            });
            continue;
        }
        let id_num = parse_index(id, "id", lineno)?;
        if id_num == 0 {
            return Err(ConlluError::InvalidNumber {
                line: lineno,
                field: "id",
                value: id.to_string(),
            });
        }
        let expected = current.tokens.len() + 1;
        if id_num != expected {
            if current.tokens.iter().any(|t| t.id == id_num) {
                return Err(ConlluError::DuplicateId {
                    line: lineno,
                    id: id_num,
                });
            }
            return Err(ConlluError::IdSequence {
                line: lineno,
                expected,
                found: id_num,
            });
        }
        let head = parse_index(cols[6], "head", lineno)?;
        current.tokens.push(Token {
            id: id_num,
            form: cols[1].to_string(),
            lemma: cols[2].to_string(),
            upos: cols[3].to_string(),
            xpos: cols[4].to_string(),
            feats: cols[5].to_string(),
            head,
            deprel: cols[7].to_string(),
            deps: cols[8].to_string(),
            misc: cols[9].to_string(),
        });
    }
    if started {
        finish(&mut sentences, &mut current, last_line)?;
    }
    Ok(Treebank {
        sentences,
        source_name: String::new(),
    })
}

fn finish(
    out: &mut Vec<Sentence>,
    current: &mut Sentence,
    lineno: usize,
) -> Result<(), ConlluError> {
    if current.tokens.is_empty() {
        return Err(ConlluError::EmptySentence { line: lineno });
    }
    out.push(core::mem::take(current));
    Ok(())
}

fn parse_index(value: &str, field: &'static str, line: usize) -> Result<usize, ConlluError> {
    if value.is_empty() || !value.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ConlluError::InvalidNumber {
            line,
            field,
            value: value.to_string(),
        });
    }
    value.parse().map_err(|_| ConlluError::InvalidNumber {
        line,
        field,
        value: value.to_string(),
    })
}

fn check_compound_id(id: &str, line: usize) -> Result<(), ConlluError> {
    let sep = if id.contains('-') { '-' } else { '.' };
    let ok = id.split_once(sep).is_some_and(|(a, b)| {
        parse_index(a, "id", line).is_ok() && parse_index(b, "id", line).is_ok()
    });
    if ok {
        Ok(())
    } else {
        Err(ConlluError::InvalidNumber {
            line,
            field: "id",
            value: id.to_string(),
        })
    }
}

/// Writes a treebank; each sentence ends with a blank line.
pub fn serialize_conllu(tb: &Treebank) -> String {
    let mut out = String::new();
    for s in &tb.sentences {
        s.write(&mut out);
    }
    out
}
