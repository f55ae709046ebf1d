use std::collections::BTreeMap;

use super::{for_each_event, LmError, BOS};
use crate::text::TokenizedSentence;

/// Raw n-gram counts for lengths `1..=order`.
///
/// Every counted n-gram has all of its suffixes counted as well. Prefixes
/// need not be: `<s>` is a history token only and never appears as a
/// unigram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    order: usize,
    counts: BTreeMap<Vec<String>, u64>,
}

impl CountTable {
    pub fn empty(order: usize) -> Result<Self, LmError> {
        if order == 0 {
            return Err(LmError::InvalidOrder);
        }
        Ok(CountTable { order, counts: BTreeMap::new() })
    }

    /// Builds a table from explicit counts, checking lengths, positivity and
    /// suffix closure.
    pub fn from_counts<I, S>(order: usize, entries: I) -> Result<Self, LmError>
    where
        I: IntoIterator<Item = (Vec<S>, u64)>,
        S: Into<String>,
    {
        let mut table = CountTable::empty(order)?;
        for (ngram, count) in entries {
            let ngram: Vec<String> = ngram.into_iter().map(Into::into).collect();
            if ngram.is_empty() || ngram.len() > order {
                return Err(LmError::InvalidCounts(format!("n-gram {ngram:?} has length outside 1..={order}")));
            }
            if count == 0 {
                return Err(LmError::InvalidCounts(format!("n-gram {ngram:?} has zero count")));
            }
            *table.counts.entry(ngram).or_insert(0) += count;
        }
        for ngram in table.counts.keys() {
            if ngram.len() > 1 && !table.counts.contains_key(&ngram[1..]) {
                return Err(LmError::InvalidCounts(format!("suffix of {ngram:?} is not counted")));
            }
            if ngram.last().is_some_and(|w| w == BOS) {
                return Err(LmError::InvalidCounts(format!("{BOS} cannot be predicted in {ngram:?}")));
            }
        }
        Ok(table)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn get(&self, ngram: &[&str]) -> u64 {
        let key: Vec<String> = ngram.iter().map(|s| s.to_string()).collect();
        self.counts.get(&key).copied().unwrap_or(0)
    }

    /// All counted n-grams in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&[String], u64)> {
        self.counts.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Adds another shard's counts. Merging is commutative.
    pub fn merge(&mut self, other: &CountTable) -> Result<(), LmError> {
        if other.order != self.order {
            return Err(LmError::InvalidCounts(format!("cannot merge order {} into order {}", other.order, self.order)));
        }
        for (k, &v) in &other.counts {
            *self.counts.entry(k.clone()).or_insert(0) += v;
        }
        Ok(())
    }
}

/// Counts every n-gram of length `1..=order` ending at a real token or at
/// the end marker, with `order - 1` begin markers of padding.
pub fn count_ngrams<'a, I>(corpus: I, order: usize) -> Result<CountTable, LmError>
where
    I: IntoIterator<Item = &'a TokenizedSentence>,
{
    let mut table = CountTable::empty(order)?;
    for_each_event(order, corpus, |history, word| {
        for n in 1..=order {
            let mut ngram: Vec<String> = history[history.len() + 1 - n..].iter().map(|s| s.to_string()).collect();
            ngram.push(word.to_owned());
            *table.counts.entry(ngram).or_insert(0) += 1;
        }
    });
    Ok(table)
}
