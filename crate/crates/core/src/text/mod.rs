//! Corpus ingestion and preprocessing: punctuation normalization,
//! tokenization, truecasing, cleaning, compound splitting and stemming.

mod clean;
mod compound;
mod truecase;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clean::{clean_corpus, clean_pair, CleanConfig, CleanOutcome, DropReason, DuplicateTracker, Script};
pub use compound::{split_compounds, SplitConfig};
pub use truecase::{train_truecaser, truecase, TruecaseModel};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}: input is not valid UTF-8")]
    InvalidUtf8 { line: usize },
    #[error("line text contains a newline character")]
    EmbeddedNewline,
    #[error("line numbers start at 1")]
    ZeroLineNumber,
    #[error("token {0:?} is empty or contains whitespace")]
    InvalidToken(String),
    #[error("cannot train on an empty corpus")]
    EmptyCorpus,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parallel files differ in length: {source_lines} source vs {target_lines} target lines")]
    ParallelLengthMismatch { source_lines: usize, target_lines: usize },
}

/// One line of a corpus file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLine {
    text: String,
    line_number: usize,
}

impl RawLine {
    pub fn new(text: impl Into<String>, line_number: usize) -> Result<Self, TextError> {
        let text = text.into();
        if text.contains(['\n', '\r']) {
            return Err(TextError::EmbeddedNewline);
        }
        if line_number == 0 {
            return Err(TextError::ZeroLineNumber);
        }
        Ok(RawLine { text, line_number })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn line_number(&self) -> usize {
        self.line_number
    }

    fn with_text(&self, text: String) -> RawLine {
        RawLine { text, line_number: self.line_number }
    }
}

/// Splits raw bytes into lines, rejecting the first line that is not valid
/// UTF-8. A trailing `\r` (CRLF files) is stripped; a final newline does not
/// produce an extra empty line.
pub fn read_lines(bytes: &[u8]) -> Result<Vec<RawLine>, TextError> {
    if bytes.is_empty() {
        return Ok(Vec::new());
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    body.split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, raw)| {
            let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
            let text = std::str::from_utf8(raw).map_err(|_| TextError::InvalidUtf8 { line: i + 1 })?;
            RawLine::new(text, i + 1)
        })
        .collect()
}

/// An ordered sequence of non-empty, whitespace-free tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct TokenizedSentence(Vec<String>);

impl TokenizedSentence {
    pub fn new(tokens: Vec<String>) -> Result<Self, TextError> {
        if let Some(bad) = tokens.iter().find(|t| t.is_empty() || t.chars().any(char::is_whitespace)) {
            return Err(TextError::InvalidToken(bad.clone()));
        }
        Ok(TokenizedSentence(tokens))
    }

    /// Splits pre-tokenized text on whitespace. Always valid.
    pub fn from_whitespace(text: &str) -> Self {
        TokenizedSentence(text.split_whitespace().map(str::to_owned).collect())
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn into_tokens(self) -> Vec<String> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.0.iter()
    }

    pub fn to_lowercase(&self) -> TokenizedSentence {
        TokenizedSentence(self.0.iter().map(|t| t.to_lowercase()).collect())
    }
}

impl fmt::Display for TokenizedSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

impl TryFrom<Vec<String>> for TokenizedSentence {
    type Error = TextError;

    fn try_from(tokens: Vec<String>) -> Result<Self, Self::Error> {
        TokenizedSentence::new(tokens)
    }
}

impl From<TokenizedSentence> for Vec<String> {
    fn from(s: TokenizedSentence) -> Self {
        s.0
    }
}

impl<'a> IntoIterator for &'a TokenizedSentence {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentencePair {
    pub pair_id: usize,
    pub source: TokenizedSentence,
    pub target: TokenizedSentence,
}

/// Builds sentence pairs from two line-aligned files; `pair_id` is the
/// 1-based line number.
pub fn pair_lines(
    source: &[TokenizedSentence],
    target: &[TokenizedSentence],
) -> Result<Vec<SentencePair>, TextError> {
    if source.len() != target.len() {
        return Err(TextError::ParallelLengthMismatch {
            source_lines: source.len(),
            target_lines: target.len(),
        });
    }
    Ok(source
        .iter()
        .zip(target)
        .enumerate()
        .map(|(i, (s, t))| SentencePair { pair_id: i + 1, source: s.clone(), target: t.clone() })
        .collect())
}

/// Typographic punctuation and the ASCII form it is rewritten to. Order matters
/// only in that every entry is applied; the targets never re-trigger a rule.
const PUNCTUATION_MAP: &[(char, &str)] = &[
    ('\u{201C}', "\""), // “
    ('\u{201D}', "\""), // ”
    ('\u{201E}', "\""), // „
    ('\u{00AB}', "\""), // «
    ('\u{00BB}', "\""), // »
    ('\u{2018}', "'"),  // ‘
    ('\u{2019}', "'"),  // ’
    ('\u{201A}', "'"),  // ‚
    ('\u{2013}', "-"),  // –
    ('\u{2014}', "-"),  // —
    ('\u{2026}', "..."),
    ('\u{00A0}', " "),
];

/// Maps typographic punctuation to ASCII and collapses runs of spaces.
pub fn normalize_punctuation(line: &RawLine) -> RawLine {
    let mut out = String::with_capacity(line.text.len());
    for c in line.text.chars() {
        match PUNCTUATION_MAP.iter().find(|(from, _)| *from == c) {
            Some((_, to)) => out.push_str(to),
            None => out.push(c),
        }
    }
    let mut collapsed = String::with_capacity(out.len());
    let mut prev_space = false;
    for c in out.chars() {
        if c == ' ' {
            if !prev_space {
                collapsed.push(c);
            }
            prev_space = true;
        } else {
            collapsed.push(c);
            prev_space = false;
        }
    }
    line.with_text(collapsed)
}

/// Characters split off the edges of a whitespace-delimited chunk.
pub const DETACHED_PUNCTUATION: &[char] = &['.', ',', ';', ':', '!', '?', '"', '(', ')'];

fn is_detached(c: char) -> bool {
    DETACHED_PUNCTUATION.contains(&c)
}

/// Whitespace tokenizer that peels clause punctuation off both ends of every
/// chunk, one token per character. Characters inside a word (hyphens,
/// apostrophes, decimal points) stay attached.
pub fn tokenize(line: &RawLine) -> TokenizedSentence {
    tokenize_str(line.text())
}

pub fn tokenize_str(text: &str) -> TokenizedSentence {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let lead_end = chunk.find(|c| !is_detached(c)).unwrap_or(chunk.len());
        let (lead, rest) = chunk.split_at(lead_end);
        tokens.extend(lead.chars().map(String::from));
        if rest.is_empty() {
            continue;
        }
        let core = rest.trim_end_matches(is_detached);
        let trail = &rest[core.len()..];
        tokens.push(core.to_owned());
        tokens.extend(trail.chars().map(String::from));
    }
    TokenizedSentence(tokens)
}

/// Normalizes punctuation then tokenizes.
pub fn preprocess(line: &RawLine) -> TokenizedSentence {
    tokenize(&normalize_punctuation(line))
}

/// Token frequencies over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn count(&self, token: &str) -> u64 {
        self.counts.get(token).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn add(&mut self, token: &str, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(token.to_owned()).or_insert(0) += n;
        self.total += n;
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_str(), v))
    }
}

impl<S: AsRef<str>> FromIterator<(S, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        let mut table = FrequencyTable::default();
        for (token, n) in iter {
            table.add(token.as_ref(), n);
        }
        table
    }
}

pub fn build_frequency_table<'a, I>(corpus: I) -> FrequencyTable
where
    I: IntoIterator<Item = &'a TokenizedSentence>,
{
    let mut table = FrequencyTable::default();
    for sentence in corpus {
        for token in sentence {
            table.add(token, 1);
        }
    }
    table
}

fn is_punctuation_token(token: &str) -> bool {
    !token.is_empty() && token.chars().all(|c| !c.is_alphanumeric())
}

/// Truncates every word token to its first `k` characters so that inflected
/// forms share an alignment vocabulary. Punctuation tokens are kept as is.
pub fn stem_for_alignment(sentence: &TokenizedSentence, k: usize) -> TokenizedSentence {
    assert!(k >= 1, "stem length must be at least 1");
    TokenizedSentence(
        sentence
            .iter()
            .map(|t| {
                if is_punctuation_token(t) {
                    t.clone()
                } else {
                    t.chars().take(k).collect()
                }
            })
            .collect(),
    )
}
