use std::cmp::Ordering;

use super::FrequencyTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitConfig {
    /// Minimum length of every part, in characters.
    pub min_part_len: usize,
    /// Linking morphemes that may sit between two parts and are dropped from
    /// the output (German "s", "es", ...).
    pub fillers: Vec<String>,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig { min_part_len: 3, fillers: Vec::new() }
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    parts: Vec<String>,
    counts: Vec<u64>,
    log_mean: f64,
}

impl Candidate {
    fn new(parts: Vec<String>, counts: Vec<u64>) -> Self {
        let log_mean = counts.iter().map(|&c| (c as f64).ln()).sum::<f64>() / counts.len() as f64;
        Candidate { parts, counts, log_mean }
    }

    fn part_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts.iter().map(|p| p.chars().count())
    }

    /// `Greater` means `self` is preferred: higher geometric mean, then fewer
    /// parts, then the longer leftmost part.
    fn preference(&self, other: &Candidate) -> Ordering {
        let tol = 1e-12 * self.log_mean.abs().max(other.log_mean.abs()).max(1.0);
        if (self.log_mean - other.log_mean).abs() > tol {
            return self.log_mean.partial_cmp(&other.log_mean).unwrap_or(Ordering::Equal);
        }
        other
            .parts
            .len()
            .cmp(&self.parts.len())
            .then_with(|| self.part_lengths().cmp(other.part_lengths()))
    }

    /// geometric mean of part counts > `own`, decided exactly when the
    /// product fits in 128 bits
    fn beats(&self, own: u64) -> bool {
        let k = self.counts.len() as u32;
        let product = self.counts.iter().try_fold(1u128, |acc, &c| acc.checked_mul(c as u128));
        let bound = (own as u128).checked_pow(k);
        match (product, bound) {
            (Some(p), Some(b)) => p > b,
            (Some(_), None) => false,
            _ => own == 0 || self.log_mean > (own as f64).ln(),
        }
    }
}

fn collect(
    chars: &[char],
    pos: usize,
    table: &FrequencyTable,
    config: &SplitConfig,
    parts: &mut Vec<String>,
    counts: &mut Vec<u64>,
    out: &mut Vec<Candidate>,
) {
    let n = chars.len();
    let min = config.min_part_len.max(1);
    for end in (pos + min)..=n {
        let part: String = chars[pos..end].iter().collect();
        let count = table.count(&part);
        if count == 0 {
            continue;
        }
        parts.push(part);
        counts.push(count);
        if end == n {
            if parts.len() >= 2 {
                out.push(Candidate::new(parts.clone(), counts.clone()));
            }
        } else {
            collect(chars, end, table, config, parts, counts, out);
            for filler in &config.fillers {
                let f: Vec<char> = filler.chars().collect();
                if !f.is_empty() && chars[end..].starts_with(&f) && end + f.len() < n {
                    collect(chars, end + f.len(), table, config, parts, counts, out);
                }
            }
        }
        parts.pop();
        counts.pop();
    }
}

/// Splits `token` into known parts when the geometric mean of the parts'
/// corpus frequencies is strictly higher than the frequency of the token
/// itself. Returns `[token]` when no segmentation qualifies.
pub fn split_compounds(token: &str, table: &FrequencyTable, config: &SplitConfig) -> Vec<String> {
    let chars: Vec<char> = token.chars().collect();
    let mut candidates = Vec::new();
    collect(&chars, 0, table, config, &mut Vec::new(), &mut Vec::new(), &mut candidates);

    let best = candidates.into_iter().reduce(|best, c| if c.preference(&best) == Ordering::Greater { c } else { best });
    match best {
        Some(best) if best.beats(table.count(token)) => best.parts,
        _ => vec![token.to_owned()],
    }
}
