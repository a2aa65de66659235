//! Year-numeral detection, substitution and batch synthesis.
//!
//! A year numeral is exactly four ASCII digits with a space immediately
//! before and after, i.e. the regular expression `(?<= )\d{4}(?= )`. Only
//! the digit string of the *first* match is substituted, but every
//! space-delimited occurrence of that string is.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::conllu::{Sentence, Treebank};
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumeralMatch {
    /// Byte offset of the first digit.
    pub start: usize,
    /// Byte offset one past the last digit.
    pub end: usize,
    pub digits: String,
}

/// All space-delimited four-digit numerals, left to right.
pub fn find_year_numerals(text: &str) -> Vec<NumeralMatch> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 1;
    while i + 4 < b.len() {
        if b[i - 1] == b' ' && b[i..i + 4].iter().all(u8::is_ascii_digit) && b[i + 4] == b' ' {
            out.push(NumeralMatch {
                start: i,
                end: i + 4,
                digits: text[i..i + 4].to_string(),
            });
            // the trailing space may open the next match
            i += 5;
        } else {
            i += 1;
        }
    }
    out
}

/// One synthesized sentence of an augmented batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variant {
    pub replacement: u32,
    pub text: String,
    pub gold: Sentence,
}

/// An original gold sentence and its numeral-substituted variants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentedBatch {
    pub original: Sentence,
    /// The digit string that was replaced in every variant.
    pub replaced_digits: String,
    pub variants: Vec<Variant>,
}

impl AugmentedBatch {
    pub fn len(&self) -> usize {
        self.variants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variants.is_empty()
    }
}

/// Replaces the first year numeral of `s` with a four-digit `replacement`.
///
/// Tokens whose form is the replaced numeral (and which sit on one of the
/// replaced text spans, when the tokens can be aligned to the text) get the
/// new FORM and LEMMA; every other column is untouched. The `# text`
/// comment is rewritten.
pub fn substitute_numeral(s: &Sentence, replacement: u32) -> Result<Sentence, Error> {
    if !(1000..=9999).contains(&replacement) {
        return Err(Error::ReplacementOutOfRange(replacement));
    }
    substitute_with(s, &replacement.to_string())
}

/// Same rule as [`substitute_numeral`] with an arbitrary replacement string.
pub fn substitute_with(s: &Sentence, replacement: &str) -> Result<Sentence, Error> {
    let text = s.surface_text();
    let matches = find_year_numerals(&text);
    let digits = match matches.first() {
        Some(m) => m.digits.clone(),
        None => return Err(Error::NoNumeral),
    };
    let targets: Vec<&NumeralMatch> = matches.iter().filter(|m| m.digits == digits).collect();

    let mut new_text = String::with_capacity(text.len());
    let mut last = 0;
    for m in &targets {
        new_text.push_str(&text[last..m.start]);
        new_text.push_str(replacement);
        last = m.end;
    }
    new_text.push_str(&text[last..]);

    let mut out = s.clone();
    let hit = |idx: usize| s.tokens[idx].form == digits;
    match align_units(s, &text) {
        Some(offsets) => {
            for (tok, start) in offsets {
                if hit(tok) && targets.iter().any(|m| m.start == start) {
                    set_form(&mut out, tok, replacement);
                }
            }
        }
        None => {
            for idx in 0..s.tokens.len() {
                if hit(idx) {
                    set_form(&mut out, idx, replacement);
                }
            }
        }
    }
    out.set_comment_value("text", &new_text);
    Ok(out)
}

fn set_form(s: &mut Sentence, idx: usize, value: &str) {
    let tok = &mut s.tokens[idx];
    tok.form = value.to_string();
    tok.lemma = value.to_string();
}

/// Byte offsets of plain word tokens in `text`, found by scanning the
/// surface forms left to right. `None` when some form cannot be located.
fn align_units(s: &Sentence, text: &str) -> Option<Vec<(usize, usize)>> {
    let mut cursor = 0;
    let mut out = Vec::new();
    for unit in s.surface_units() {
        if unit.form.is_empty() {
            continue;
        }
        let rel = text[cursor..].find(unit.form)?;
        // only whitespace may be skipped between tokens
        if !text[cursor..cursor + rel].chars().all(char::is_whitespace) {
            return None;
        }
        let start = cursor + rel;
        if let Some(tok) = unit.token {
            out.push((tok, start));
        }
        cursor = start + unit.form.len();
    }
    Some(out)
}

/// One variant per number, in order.
pub fn synthesize_batch(s: &Sentence, numbers: &[u32]) -> Result<AugmentedBatch, Error> {
    let text = s.surface_text();
    let replaced_digits = find_year_numerals(&text)
        .into_iter()
        .next()
        .ok_or(Error::NoNumeral)?
        .digits;
    let variants = numbers
        .iter()
        .map(|&n| {
            let gold = substitute_numeral(s, n)?;
            let text = gold.surface_text();
            Ok(Variant {
                replacement: n,
                text,
                gold,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(AugmentedBatch {
        original: s.clone(),
        replaced_digits,
        variants,
    })
}

pub fn has_year_numeral(s: &Sentence) -> bool {
    !find_year_numerals(&s.surface_text()).is_empty()
}

/// Inserts, right after every year-bearing sentence, one substituted copy
/// per number. Copies get `-aug<k>` appended to their `sent_id`.
pub fn augment_treebank(tb: &Treebank, numbers: &[u32]) -> Result<Treebank, Error> {
    let mut sentences = Vec::with_capacity(tb.len());
    for s in &tb.sentences {
        sentences.push(s.clone());
        if !has_year_numeral(s) {
            continue;
        }
        for (k, &n) in numbers.iter().enumerate() {
            let mut v = substitute_numeral(s, n)?;
            if let Some(id) = s.sent_id() {
                let id = format!("{id}-aug{}", k + 1);
                v.set_comment_value("sent_id", &id);
            }
            sentences.push(v);
        }
    }
    Ok(Treebank {
        sentences,
        source_name: tb.source_name.clone(),
    })
}

/// Replaces the first year numeral of every year-bearing sentence with a
/// placeholder token; the sentence count is unchanged.
pub fn substitute_tokens(tb: &Treebank, token: &str) -> Result<Treebank, Error> {
    if token.is_empty() || token.chars().any(char::is_whitespace) {
        return Err(Error::InvalidToken(token.to_string()));
    }
    let sentences = tb
        .sentences
        .iter()
        .map(|s| {
            if has_year_numeral(s) {
                substitute_with(s, token)
            } else {
                Ok(s.clone())
            }
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Treebank {
        sentences,
        source_name: tb.source_name.clone(),
    })
}
