use std::collections::BTreeSet;

use super::{for_each_event, LanguageModel, LmError};
use crate::text::TokenizedSentence;

/// Linear mixture `p(w|h) = sum_i l_i p_i(w|h)`.
#[derive(Debug, Clone)]
pub struct InterpolatedModel<M> {
    components: Vec<M>,
    weights: Vec<f64>,
}

fn check_weights(n_models: usize, weights: &[f64]) -> Result<(), LmError> {
    if n_models < 2 {
        return Err(LmError::WeightError(format!("need at least 2 models, got {n_models}")));
    }
    if weights.len() != n_models {
        return Err(LmError::WeightError(format!("{} weights for {n_models} models", weights.len())));
    }
    if let Some(w) = weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
        return Err(LmError::WeightError(format!("weight {w} outside [0, 1]")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(LmError::WeightError(format!("weights sum to {sum}")));
    }
    Ok(())
}

pub fn interpolate<M: LanguageModel>(models: Vec<M>, weights: Vec<f64>) -> Result<InterpolatedModel<M>, LmError> {
    check_weights(models.len(), &weights)?;
    Ok(InterpolatedModel { components: models, weights })
}

impl<M> InterpolatedModel<M> {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[M] {
        &self.components
    }
}

impl<M: LanguageModel> LanguageModel for InterpolatedModel<M> {
    fn order(&self) -> usize {
        self.components.iter().map(LanguageModel::order).max().unwrap_or(1)
    }

    fn prob(&self, history: &[&str], word: &str) -> f64 {
        self.components.iter().zip(&self.weights).map(|(m, &l)| l * m.prob(history, word)).sum()
    }

    /// Union of the component vocabularies.
    fn vocabulary(&self) -> Vec<String> {
        let all: BTreeSet<String> = self.components.iter().flat_map(LanguageModel::vocabulary).collect();
        all.into_iter().collect()
    }
}

/// All weight vectors on the simplex whose entries are multiples of `step`,
/// first weight descending.
fn simplex_grid(n_models: usize, steps: usize) -> Vec<Vec<usize>> {
    fn fill(rest: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=rest).rev() {
            prefix.push(k);
            fill(rest - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(steps, n_models, &mut Vec::new(), &mut out);
    out
}

/// Grid search for the mixture weights with the lowest held-out perplexity.
///
/// Every point of the simplex with coordinates in multiples of `step` is
/// tried. Ties (relative difference below 1e-12) go to the point listed
/// first, i.e. the one with the largest weight on the first model, then on
/// the second, and so on. Returns the weights and their perplexity.
pub fn tune_weights<M: LanguageModel>(
    models: &[M],
    heldout: &[TokenizedSentence],
    step: f64,
) -> Result<(Vec<f64>, f64), LmError> {
    if models.len() < 2 {
        return Err(LmError::WeightError(format!("need at least 2 models, got {}", models.len())));
    }
    if heldout.is_empty() {
        return Err(LmError::EmptyCorpus);
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(LmError::InvalidGridStep(step));
    }
    let steps = (1.0 / step).round();
    if (steps * step - 1.0).abs() > 1e-9 {
        return Err(LmError::InvalidGridStep(step));
    }
    let steps = steps as usize;

    let order = models.iter().map(LanguageModel::order).max().unwrap_or(1);
    let mut table: Vec<Vec<f64>> = Vec::new();
    for_each_event(order, heldout, |h, w| table.push(models.iter().map(|m| m.prob(h, w)).collect()));

    let mut best: Option<(Vec<f64>, f64)> = None;
    for point in simplex_grid(models.len(), steps) {
        let weights: Vec<f64> = point.iter().map(|&k| k as f64 / steps as f64).collect();
        let log_sum: f64 = table
            .iter()
            .map(|ps| ps.iter().zip(&weights).map(|(p, l)| p * l).sum::<f64>().ln())
            .sum();
        let ppl = (-log_sum / table.len() as f64).exp();
        let better = match &best {
            None => true,
            Some((_, b)) => ppl < *b && (b - ppl) > 1e-12 * b.abs(),
        };
        if better {
            best = Some((weights, ppl));
        }
    }
    Ok(best.expect("grid is never empty"))
}
