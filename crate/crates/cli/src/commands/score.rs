use mtkit::metrics::{
    bleu, interpretability_band, meteor_corpus, nist, normalize_score, ter_corpus, Band, BleuConfig, BleuLevel,
    BleuReport, EvalPair, MeteorReport, Metric, NistReport, TerReport,
};
use mtkit::text::{preprocess, RawLine, TokenizedSentence};
use serde::{Deserialize, Serialize};

use super::{parse_option, Context, Inputs};
use crate::args::ScoreArgs;
use crate::config::ScoreSection;
use crate::error::CliError;
use crate::output::{cell, Envelope, Tabular};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricRow {
    pub metric: Metric,
    /// Native scale: BLEU and METEOR in [0, 1], NIST in bits, TER in percent.
    pub raw: f64,
    /// 0-100, higher is better.
    pub normalized: Option<f64>,
    pub band: Option<Band>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreReport {
    pub segments: usize,
    pub references: usize,
    pub rows: Vec<MetricRow>,
    pub bleu: Option<BleuReport>,
    pub nist: Option<NistReport>,
    pub meteor: Option<MeteorReport>,
    pub ter: Option<TerReport>,
}

impl Tabular for ScoreReport {
    fn rows(&self) -> Vec<String> {
        let mut rows = vec!["metric\traw\tnormalized\tband".to_owned()];
        for r in &self.rows {
            let band = r.band.map_or("-", Band::name);
            rows.push(format!("{}\t{:.4}\t{}\t{band}", r.metric, r.raw, cell(r.normalized, 2)));
        }
        rows
    }
}

fn sentences(lines: &[RawLine], tokenize: bool) -> Vec<TokenizedSentence> {
    lines
        .iter()
        .map(|l| if tokenize { preprocess(l) } else { TokenizedSentence::from_whitespace(l.text()) })
        .collect()
}

fn resolve(args: &ScoreArgs, ctx: &Context) -> Result<(ScoreSection, Vec<Metric>), CliError> {
    let mut s = ctx.config.score.clone();
    if !args.metrics.is_empty() {
        s.metrics = args.metrics.clone();
    }
    s.normalize |= args.normalize;
    s.band |= args.band;
    s.lowercase |= args.lowercase;
    s.tokenize |= args.tokenize;
    s.sentence_level |= args.sentence_level;
    if let Some(o) = args.bleu_order {
        s.bleu_order = o;
        if s.bleu_weights.as_ref().is_some_and(|w| w.len() != o) {
            s.bleu_weights = None;
        }
    }
    if let Some(o) = args.nist_order {
        s.nist_order = o;
    }
    let mut metrics = Vec::new();
    if s.metrics.is_empty() {
        metrics.extend(Metric::ALL);
    }
    for name in &s.metrics {
        let m: Metric = parse_option("metric", name)?;
        if !metrics.contains(&m) {
            metrics.push(m);
        }
    }
    s.metrics = metrics.iter().map(|m| m.name().to_owned()).collect();
    Ok((s, metrics))
}

pub fn score(args: &ScoreArgs, ctx: &Context) -> Result<Envelope<ScoreReport>, CliError> {
    let (section, metrics) = resolve(args, ctx)?;
    let mut inputs = Inputs::default();
    let cand = sentences(&inputs.lines("candidate", &args.candidate)?, section.tokenize);
    let mut refs = Vec::with_capacity(args.references.len());
    for (i, path) in args.references.iter().enumerate() {
        let r = sentences(&inputs.lines(&format!("reference{}", i + 1), path)?, section.tokenize);
        if r.len() != cand.len() {
            return Err(CliError::Validation(format!(
                "{}: {} lines, candidate has {}",
                path.display(),
                r.len(),
                cand.len()
            )));
        }
        refs.push(r);
    }
    let mut pairs = Vec::with_capacity(cand.len());
    for (i, c) in cand.into_iter().enumerate() {
        let pair = EvalPair::new(c, refs.iter().map(|r| r[i].clone()).collect())?;
        pairs.push(if section.lowercase { pair.to_lowercase() } else { pair });
    }

    let mut report =
        ScoreReport { segments: pairs.len(), references: refs.len(), rows: Vec::new(), bleu: None, nist: None, meteor: None, ter: None };
    for &metric in &metrics {
        let raw = match metric {
            Metric::Bleu => {
                let config = BleuConfig {
                    max_order: section.bleu_order,
                    weights: section.bleu_weights.clone(),
                    level: if section.sentence_level { BleuLevel::SentenceGeometric } else { BleuLevel::Corpus },
                    lowercase: false,
                };
                let r = bleu(&pairs, &config)?;
                let s = r.score;
                report.bleu = Some(r);
                s
            }
            Metric::Nist => {
                let r = nist(&pairs, section.nist_order)?;
                let s = r.score;
                report.nist = Some(r);
                s
            }
            Metric::Meteor => {
                let r = meteor_corpus(&pairs)?;
                let s = r.score;
                report.meteor = Some(r);
                s
            }
            Metric::Ter => {
                let r = ter_corpus(&pairs)?;
                let s = r.score;
                report.ter = Some(r);
                s
            }
        };
        let normalized = if section.normalize || section.band { Some(normalize_score(metric, raw)?.normalized) } else { None };
        let band = match (section.band, normalized) {
            (true, Some(n)) => Some(interpretability_band(n)?),
            _ => None,
        };
        report.rows.push(MetricRow { metric, raw, normalized: normalized.filter(|_| section.normalize), band });
    }
    Ok(ctx.envelope("score", &section, &inputs, report))
}
