use std::collections::HashSet;

use mtkit::lm::{count_ngrams, estimate, interpolate, perplexity, tune_weights, LanguageModel, NGramModel, Smoothing};
use serde::{Deserialize, Serialize};

use super::{parse_option, write_bytes, Context, Inputs};
use crate::args::{LmPplArgs, LmTrainArgs};
use crate::error::CliError;
use crate::output::{cell, Envelope, Tabular};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LmTrainReport {
    pub order: usize,
    pub smoothing: Smoothing,
    pub sentences: usize,
    pub tokens: usize,
    pub vocab_size: usize,
    /// Distinct counted n-grams per order.
    pub ngrams: Vec<usize>,
    pub discounts: Vec<f64>,
    pub degenerate_orders: Vec<usize>,
    pub output_sha256: String,
}

impl Tabular for LmTrainReport {
    fn rows(&self) -> Vec<String> {
        let mut rows = vec![
            format!(
                "# order={} smoothing={} sentences={} tokens={} vocab_size={}",
                self.order, self.smoothing, self.sentences, self.tokens, self.vocab_size
            ),
            "n\tngrams\tdiscount".to_owned(),
        ];
        for (i, c) in self.ngrams.iter().enumerate() {
            rows.push(format!("{}\t{c}\t{}", i + 1, cell(self.discounts.get(i).copied(), 6)));
        }
        rows
    }
}

pub fn lm_train(args: &LmTrainArgs, ctx: &Context) -> Result<Envelope<LmTrainReport>, CliError> {
    let mut section = ctx.config.lm.clone();
    if let Some(o) = args.order {
        section.order = o;
    }
    if let Some(s) = &args.smoothing {
        section.smoothing = s.clone();
    }
    let smoothing: Smoothing = parse_option("smoothing", &section.smoothing)?;

    let mut inputs = Inputs::default();
    let corpus = inputs.tokenized("corpus", &args.corpus)?;
    let table = count_ngrams(&corpus, section.order)?;
    let model = estimate(&table, smoothing)?;
    let mut ngrams = vec![0; section.order];
    for (g, _) in table.iter() {
        ngrams[g.len() - 1] += 1;
    }

    let report = LmTrainReport {
        order: section.order,
        smoothing,
        sentences: corpus.len(),
        tokens: corpus.iter().map(|s| s.len()).sum(),
        vocab_size: model.vocab_size(),
        ngrams,
        discounts: model.discounts().to_vec(),
        degenerate_orders: model.degenerate_orders().to_vec(),
        output_sha256: write_bytes(&args.output, model.to_text().as_bytes())?,
    };
    let options = serde_json::json!({ "order": section.order, "smoothing": smoothing });
    Ok(ctx.envelope("lm-train", &options, &inputs, report))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LmPplReport {
    pub models: usize,
    /// Mixture weights; absent for a single model.
    pub weights: Option<Vec<f64>>,
    pub tuned: bool,
    pub tuning_step: Option<f64>,
    pub tuning_perplexity: Option<f64>,
    pub sentences: usize,
    pub tokens: usize,
    /// Test tokens outside every model's vocabulary.
    pub oov_tokens: usize,
    pub perplexity: f64,
}

impl Tabular for LmPplReport {
    fn rows(&self) -> Vec<String> {
        let weights = match &self.weights {
            Some(w) => w.iter().map(|x| format!("{x:.4}")).collect::<Vec<_>>().join(","),
            None => "-".into(),
        };
        vec![
            "models\tweights\tsentences\ttokens\toov_tokens\tperplexity".into(),
            format!(
                "{}\t{weights}\t{}\t{}\t{}\t{:.4}",
                self.models, self.sentences, self.tokens, self.oov_tokens, self.perplexity
            ),
        ]
    }
}

pub fn lm_ppl(args: &LmPplArgs, ctx: &Context) -> Result<Envelope<LmPplReport>, CliError> {
    let mut inputs = Inputs::default();
    let mut models = Vec::with_capacity(args.models.len());
    for (i, path) in args.models.iter().enumerate() {
        let bytes = inputs.read(&format!("model{}", i + 1), path)?;
        let text = String::from_utf8(bytes)
            .map_err(|_| CliError::Validation(format!("{}: model file is not UTF-8", path.display())))?;
        models.push(
            NGramModel::from_text(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?,
        );
    }
    let test = inputs.tokenized("test", &args.test)?;
    let step = args.step.unwrap_or(ctx.config.lm.step);

    let mut vocab: HashSet<String> = HashSet::new();
    for m in &models {
        vocab.extend(m.vocabulary());
    }
    let oov_tokens = test.iter().flatten().filter(|t| !vocab.contains(*t)).count();

    let (weights, tuned, tuning_perplexity, ppl) = if models.len() == 1 {
        if args.weights.is_some() || args.tune_on.is_some() {
            return Err(CliError::Validation("--weights and --tune-on need at least two models".into()));
        }
        (None, false, None, perplexity(&models[0], &test)?)
    } else {
        let refs: Vec<&NGramModel> = models.iter().collect();
        let (weights, tuned, tuning_ppl) = match (&args.weights, &args.tune_on) {
            (Some(w), _) => (w.clone(), false, None),
            (None, Some(path)) => {
                let heldout = inputs.tokenized("heldout", path)?;
                let (w, p) = tune_weights(&refs, &heldout, step)?;
                (w, true, Some(p))
            }
            (None, None) => {
                return Err(CliError::Validation("a mixture needs --weights or --tune-on".into()));
            }
        };
        let mix = interpolate(refs, weights.clone())?;
        (Some(weights), tuned, tuning_ppl, perplexity(&mix, &test)?)
    };

    let report = LmPplReport {
        models: models.len(),
        weights: weights.clone(),
        tuned,
        tuning_step: tuned.then_some(step),
        tuning_perplexity,
        sentences: test.len(),
        tokens: test.iter().map(|s| s.len()).sum(),
        oov_tokens,
        perplexity: ppl,
    };
    let options = serde_json::json!({ "weights": args.weights, "tuned": tuned, "step": tuned.then_some(step) });
    Ok(ctx.envelope("lm-ppl", &options, &inputs, report))
}
