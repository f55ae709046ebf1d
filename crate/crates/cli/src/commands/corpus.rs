use std::collections::BTreeMap;

use mtkit::text::{
    build_frequency_table, clean_corpus, pair_lines, preprocess, split_compounds as split_token, train_truecaser,
    truecase as recase, CleanConfig, DropReason, SplitConfig, TokenizedSentence,
};
use serde::{Deserialize, Serialize};

use super::{parse_option, write_sentences, Context, Inputs};
use crate::args::{CleanArgs, SplitArgs, TokenizeArgs, TruecaseArgs};
use crate::error::CliError;
use crate::output::{Envelope, Tabular};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dropped {
    pub pair_id: usize,
    pub reason: DropReason,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CleanReport {
    pub config: CleanConfig,
    pub pairs: usize,
    pub kept: usize,
    pub dropped: Vec<Dropped>,
    pub reason_counts: BTreeMap<String, usize>,
    pub source_sha256: String,
    pub target_sha256: String,
}

impl Tabular for CleanReport {
    fn rows(&self) -> Vec<String> {
        let mut rows = vec![format!("# kept {} of {} pairs", self.kept, self.pairs), "pair_id\treason".to_owned()];
        rows.extend(self.dropped.iter().map(|d| format!("{}\t{}", d.pair_id, d.reason)));
        rows
    }
}

pub fn clean(args: &CleanArgs, ctx: &Context) -> Result<Envelope<CleanReport>, CliError> {
    let mut config = ctx.config.clean.clone();
    if let Some(v) = args.max_tokens {
        config.max_tokens = v;
    }
    if let Some(v) = args.max_length_ratio {
        config.max_length_ratio = v;
    }
    if let Some(v) = args.foreign_char_ratio {
        config.foreign_char_ratio = v;
    }
    if args.keep_duplicates {
        config.drop_duplicates = false;
    }
    if args.require_terminal_punct {
        config.require_terminal_punct = true;
    }
    if let Some(s) = &args.source_script {
        config.source_script = parse_option("--source-script", s)?;
    }
    if let Some(s) = &args.target_script {
        config.target_script = parse_option("--target-script", s)?;
    }

    let mut inputs = Inputs::default();
    let source = inputs.tokenized("source", &args.source)?;
    let target = inputs.tokenized("target", &args.target)?;
    let pairs = pair_lines(&source, &target)?;
    let (kept, dropped) = clean_corpus(&pairs, &config)?;

    let source_sha256 = write_sentences(&args.out_source, kept.iter().map(|p| &p.source))?;
    let target_sha256 = write_sentences(&args.out_target, kept.iter().map(|p| &p.target))?;
    let mut reason_counts = BTreeMap::new();
    for (_, r) in &dropped {
        *reason_counts.entry(r.to_string()).or_insert(0) += 1;
    }
    let report = CleanReport {
        config: config.clone(),
        pairs: pairs.len(),
        kept: kept.len(),
        dropped: dropped.into_iter().map(|(pair_id, reason)| Dropped { pair_id, reason }).collect(),
        reason_counts,
        source_sha256,
        target_sha256,
    };
    Ok(ctx.envelope("clean", &config, &inputs, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenizeReport {
    pub lines: usize,
    pub tokens: usize,
    pub output_sha256: String,
}

impl Tabular for TokenizeReport {
    fn rows(&self) -> Vec<String> {
        vec!["lines\ttokens\toutput_sha256".into(), format!("{}\t{}\t{}", self.lines, self.tokens, self.output_sha256)]
    }
}

pub fn tokenize(args: &TokenizeArgs, ctx: &Context) -> Result<Envelope<TokenizeReport>, CliError> {
    let mut inputs = Inputs::default();
    let lines = inputs.lines("input", &args.input)?;
    let out: Vec<TokenizedSentence> = lines.iter().map(preprocess).collect();
    let report = TokenizeReport {
        lines: out.len(),
        tokens: out.iter().map(TokenizedSentence::len).sum(),
        output_sha256: write_sentences(&args.output, &out)?,
    };
    Ok(ctx.envelope("tokenize", &serde_json::json!({}), &inputs, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruecaseReport {
    pub training_sentences: usize,
    pub model_entries: usize,
    pub lines: usize,
    /// Lines whose first token changed.
    pub changed: usize,
    pub output_sha256: String,
}

impl Tabular for TruecaseReport {
    fn rows(&self) -> Vec<String> {
        vec![
            "training_sentences\tmodel_entries\tlines\tchanged\toutput_sha256".into(),
            format!(
                "{}\t{}\t{}\t{}\t{}",
                self.training_sentences, self.model_entries, self.lines, self.changed, self.output_sha256
            ),
        ]
    }
}

pub fn truecase(args: &TruecaseArgs, ctx: &Context) -> Result<Envelope<TruecaseReport>, CliError> {
    let mut inputs = Inputs::default();
    let train = inputs.tokenized("train", &args.train)?;
    let input = inputs.tokenized("input", &args.input)?;
    let model = train_truecaser(&train)?;
    let out: Vec<TokenizedSentence> = input.iter().map(|s| recase(s, &model)).collect();
    let report = TruecaseReport {
        training_sentences: train.len(),
        model_entries: model.len(),
        lines: out.len(),
        changed: input.iter().zip(&out).filter(|(a, b)| a != b).count(),
        output_sha256: write_sentences(&args.output, &out)?,
    };
    Ok(ctx.envelope("truecase", &serde_json::json!({}), &inputs, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitReport {
    pub min_part_len: usize,
    pub fillers: Vec<String>,
    pub lines: usize,
    pub tokens: usize,
    /// Token occurrences that were split.
    pub split_tokens: usize,
    /// Every distinct token that was split, with its parts.
    pub splits: BTreeMap<String, Vec<String>>,
    pub output_sha256: String,
}

impl Tabular for SplitReport {
    fn rows(&self) -> Vec<String> {
        let mut rows = vec![
            format!("# {} of {} tokens split", self.split_tokens, self.tokens),
            "token\tparts".to_owned(),
        ];
        rows.extend(self.splits.iter().map(|(t, p)| format!("{t}\t{}", p.join(" "))));
        rows
    }
}

pub fn split_compounds(args: &SplitArgs, ctx: &Context) -> Result<Envelope<SplitReport>, CliError> {
    let mut section = ctx.config.split.clone();
    if let Some(v) = args.min_part_len {
        section.min_part_len = v;
    }
    if !args.fillers.is_empty() {
        section.fillers = args.fillers.clone();
    }
    if section.min_part_len == 0 {
        return Err(CliError::Validation("min_part_len must be at least 1".into()));
    }
    if let Some(f) = section.fillers.iter().find(|f| f.is_empty() || f.contains(char::is_whitespace)) {
        return Err(CliError::Validation(format!("invalid filler {f:?}")));
    }

    let mut inputs = Inputs::default();
    let input = inputs.tokenized("input", &args.input)?;
    let table = match &args.frequencies {
        Some(path) => build_frequency_table(&inputs.tokenized("frequencies", path)?),
        None => build_frequency_table(&input),
    };
    let config = SplitConfig { min_part_len: section.min_part_len, fillers: section.fillers.clone() };

    let mut splits = BTreeMap::new();
    let (mut tokens, mut split_tokens) = (0, 0);
    let mut out = Vec::with_capacity(input.len());
    for sentence in &input {
        let mut words = Vec::new();
        for token in sentence {
            tokens += 1;
            let parts = split_token(token, &table, &config);
            if parts.len() > 1 {
                split_tokens += 1;
                splits.entry(token.clone()).or_insert_with(|| parts.clone());
            }
            words.extend(parts);
        }
        out.push(TokenizedSentence::new(words)?);
    }
    let report = SplitReport {
        min_part_len: section.min_part_len,
        fillers: section.fillers.clone(),
        lines: out.len(),
        tokens,
        split_tokens,
        splits,
        output_sha256: write_sentences(&args.output, &out)?,
    };
    Ok(ctx.envelope("split-compounds", &section, &inputs, report))
}
