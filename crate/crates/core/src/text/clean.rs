use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{SentencePair, TextError, TokenizedSentence};

/// Writing system a side of the corpus is expected to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Script {
    #[default]
    Latin,
    Cyrillic,
    Greek,
    /// Disables the foreign-script rule for this side.
    Any,
}

impl Script {
    fn contains(self, c: char) -> bool {
        match self {
            Script::Latin => {
                c.is_ascii_alphabetic()
                    || matches!(c, '\u{00AA}' | '\u{00BA}')
                    || (('\u{00C0}'..='\u{024F}').contains(&c) && c != '\u{00D7}' && c != '\u{00F7}')
                    || ('\u{1E00}'..='\u{1EFF}').contains(&c)
            }
            Script::Cyrillic => ('\u{0400}'..='\u{052F}').contains(&c),
            Script::Greek => ('\u{0370}'..='\u{03FF}').contains(&c) || ('\u{1F00}'..='\u{1FFF}').contains(&c),
            Script::Any => true,
        }
    }

    /// Fraction of alphabetic characters outside this script; 0 when the
    /// sentence has no letters at all.
    pub fn foreign_fraction(self, sentence: &TokenizedSentence) -> f64 {
        let (mut letters, mut foreign) = (0usize, 0usize);
        for c in sentence.iter().flat_map(|t| t.chars()).filter(|c| c.is_alphabetic()) {
            letters += 1;
            if !self.contains(c) {
                foreign += 1;
            }
        }
        if letters == 0 {
            0.0
        } else {
            foreign as f64 / letters as f64
        }
    }
}

impl FromStr for Script {
    type Err = TextError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "latin" => Ok(Script::Latin),
            "cyrillic" => Ok(Script::Cyrillic),
            "greek" => Ok(Script::Greek),
            "any" => Ok(Script::Any),
            other => Err(TextError::InvalidConfig(format!("unknown script {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CleanConfig {
    pub max_tokens: usize,
    pub max_length_ratio: f64,
    pub foreign_char_ratio: f64,
    pub drop_duplicates: bool,
    pub require_terminal_punct: bool,
    pub source_script: Script,
    pub target_script: Script,
}

impl Default for CleanConfig {
    fn default() -> Self {
        CleanConfig {
            max_tokens: 80,
            max_length_ratio: 9.0,
            foreign_char_ratio: 0.5,
            drop_duplicates: true,
            require_terminal_punct: false,
            source_script: Script::Latin,
            target_script: Script::Latin,
        }
    }
}

impl CleanConfig {
    pub fn validate(&self) -> Result<(), TextError> {
        if self.max_tokens == 0 {
            return Err(TextError::InvalidConfig("max_tokens must be positive".into()));
        }
        if !(self.max_length_ratio.is_finite() && self.max_length_ratio > 0.0) {
            return Err(TextError::InvalidConfig("max_length_ratio must be a positive number".into()));
        }
        if !(0.0..=1.0).contains(&self.foreign_char_ratio) {
            return Err(TextError::InvalidConfig("foreign_char_ratio must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Why a pair was removed. Variants are listed in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DropReason {
    TooLong,
    BadRatio,
    Empty,
    ForeignScript,
    Duplicate,
    Unfinished,
}

impl DropReason {
    pub const ALL: [DropReason; 6] = [
        DropReason::TooLong,
        DropReason::BadRatio,
        DropReason::Empty,
        DropReason::ForeignScript,
        DropReason::Duplicate,
        DropReason::Unfinished,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::TooLong => "TooLong",
            DropReason::BadRatio => "BadRatio",
            DropReason::Empty => "Empty",
            DropReason::ForeignScript => "ForeignScript",
            DropReason::Duplicate => "Duplicate",
            DropReason::Unfinished => "Unfinished",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CleanOutcome {
    Keep,
    Drop(DropReason),
}

/// Remembers every pair that reached the duplicate check.
#[derive(Debug, Default, Clone)]
pub struct DuplicateTracker {
    seen: HashSet<(TokenizedSentence, TokenizedSentence)>,
}

impl DuplicateTracker {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns true if the pair had been seen before.
    fn check_and_insert(&mut self, pair: &SentencePair) -> bool {
        !self.seen.insert((pair.source.clone(), pair.target.clone()))
    }
}

const TERMINAL_TOKENS: &[&str] = &[".", "!", "?", "\"", ")"];

fn is_finished(sentence: &TokenizedSentence) -> bool {
    sentence.tokens().last().is_some_and(|t| TERMINAL_TOKENS.contains(&t.as_str()))
}

/// Applies the cleaning rules in `DropReason` order and reports the first one
/// that fails. The length ratio is only defined when both sides are non-empty,
/// so empty pairs always surface as `Empty`.
pub fn clean_pair(pair: &SentencePair, config: &CleanConfig, seen: &mut DuplicateTracker) -> CleanOutcome {
    let (ls, lt) = (pair.source.len(), pair.target.len());
    if ls > config.max_tokens || lt > config.max_tokens {
        return CleanOutcome::Drop(DropReason::TooLong);
    }
    if ls > 0 && lt > 0 {
        let ratio = ls.max(lt) as f64 / ls.min(lt) as f64;
        if ratio > config.max_length_ratio {
            return CleanOutcome::Drop(DropReason::BadRatio);
        }
    }
    if ls == 0 || lt == 0 {
        return CleanOutcome::Drop(DropReason::Empty);
    }
    if config.source_script.foreign_fraction(&pair.source) > config.foreign_char_ratio
        || config.target_script.foreign_fraction(&pair.target) > config.foreign_char_ratio
    {
        return CleanOutcome::Drop(DropReason::ForeignScript);
    }
    if config.drop_duplicates && seen.check_and_insert(pair) {
        return CleanOutcome::Drop(DropReason::Duplicate);
    }
    if config.require_terminal_punct && !(is_finished(&pair.source) && is_finished(&pair.target)) {
        return CleanOutcome::Drop(DropReason::Unfinished);
    }
    CleanOutcome::Keep
}

/// Sequential left-to-right cleaning pass. Returns the kept pairs and one
/// `(pair_id, reason)` entry per dropped pair, both in input order.
pub fn clean_corpus(
    pairs: &[SentencePair],
    config: &CleanConfig,
) -> Result<(Vec<SentencePair>, Vec<(usize, DropReason)>), TextError> {
    config.validate()?;
    let mut seen = DuplicateTracker::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for pair in pairs {
        match clean_pair(pair, config, &mut seen) {
            CleanOutcome::Keep => kept.push(pair.clone()),
            CleanOutcome::Drop(reason) => dropped.push((pair.pair_id, reason)),
        }
    }
    Ok((kept, dropped))
}
