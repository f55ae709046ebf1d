use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{TextError, TokenizedSentence};

/// Most frequent surface form per lowercased token, learned from
/// non-sentence-initial positions only.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruecaseModel {
    best_form: BTreeMap<String, String>,
    evidence: BTreeMap<String, u64>,
}

impl TruecaseModel {
    pub fn best_form(&self, lowercase: &str) -> Option<&str> {
        self.best_form.get(lowercase).map(String::as_str)
    }

    pub fn evidence(&self, lowercase: &str) -> u64 {
        self.evidence.get(lowercase).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.best_form.is_empty()
    }

    pub fn len(&self) -> usize {
        self.best_form.len()
    }
}

pub fn train_truecaser<'a, I>(corpus: I) -> Result<TruecaseModel, TextError>
where
    I: IntoIterator<Item = &'a TokenizedSentence>,
{
    let mut forms: BTreeMap<String, BTreeMap<&'a str, u64>> = BTreeMap::new();
    let mut sentences = 0usize;
    for sentence in corpus {
        sentences += 1;
        for token in sentence.tokens().iter().skip(1) {
            *forms.entry(token.to_lowercase()).or_default().entry(token.as_str()).or_insert(0) += 1;
        }
    }
    if sentences == 0 {
        return Err(TextError::EmptyCorpus);
    }

    let mut model = TruecaseModel::default();
    for (key, surface) in forms {
        // BTreeMap iterates surfaces in ascending order, so the first maximum
        // is the lexicographically smallest among ties.
        let (best, _) = surface
            .iter()
            .fold((None::<&str>, 0u64), |(best, n), (&form, &c)| if c > n { (Some(form), c) } else { (best, n) });
        model.evidence.insert(key.clone(), surface.values().sum());
        if let Some(best) = best {
            model.best_form.insert(key, best.to_owned());
        }
    }
    Ok(model)
}

/// Recases the sentence-initial token; everything else is left alone.
pub fn truecase(sentence: &TokenizedSentence, model: &TruecaseModel) -> TokenizedSentence {
    let mut tokens = sentence.tokens().to_vec();
    if let Some(first) = tokens.first_mut() {
        let key = first.to_lowercase();
        *first = match model.best_form(&key) {
            Some(form) => form.to_owned(),
            None => key,
        };
    }
    TokenizedSentence(tokens)
}
