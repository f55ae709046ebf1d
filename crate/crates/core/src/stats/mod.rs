//! Descriptive statistics, significance tests and intraclass correlation
//! over score tables.

mod table;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};
use thiserror::Error;

pub use table::{ScoreRow, ScoreTable};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("no values")]
    EmptyInput,
    #[error("only {0} non-zero differences, at least 5 are needed")]
    TooFewPairs(usize),
    #[error("samples have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("each sample needs at least 2 values")]
    TooFewValues,
    #[error("incomplete matrix: {0}")]
    IncompleteMatrix(String),
    #[error("ICC is undefined: the matrix has no variance to partition")]
    DegenerateVariance,
    #[error("score table: {0}")]
    Table(String),
}

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Differences and rank gaps closer than this are treated as ties.
const TIE_TOLERANCE: f64 = 1e-9;

/// `x[0] + mean(x - x[0])`: exact for constant input.
fn mean_of(xs: &[f64]) -> f64 {
    let base = xs[0];
    base + xs.iter().map(|x| x - base).sum::<f64>() / xs.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Descriptive {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; absent for a single value.
    pub sd: Option<f64>,
    pub min: f64,
    pub max: f64,
}

pub fn descriptive(values: &[f64]) -> Result<Descriptive, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    let n = values.len();
    let mean = mean_of(values);
    let sd = (n >= 2).then(|| (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt());
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(Descriptive { n, mean, sd, min, max })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignificanceReport {
    pub test: String,
    pub statistic: f64,
    pub p_value: f64,
    /// Mean of `x` minus mean of `y` (mean paired difference for paired
    /// tests).
    pub effect: f64,
    pub standard_error: Option<f64>,
    pub degrees_of_freedom: Option<f64>,
    /// Pairs (Wilcoxon: non-zero differences) or total observations.
    pub n: usize,
    pub alpha: f64,
    pub significant: bool,
}

impl SignificanceReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        test: &str,
        statistic: f64,
        p_value: f64,
        effect: f64,
        standard_error: Option<f64>,
        degrees_of_freedom: Option<f64>,
        n: usize,
        alpha: f64,
    ) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        SignificanceReport {
            test: test.to_owned(),
            statistic,
            p_value,
            effect,
            standard_error,
            degrees_of_freedom,
            n,
            alpha,
            significant: p_value < alpha,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WilcoxonMethod {
    /// Exact up to 25 pairs, normal approximation above.
    #[default]
    Auto,
    Exact,
    Normal,
}

/// Largest number of pairs for which [`WilcoxonMethod::Auto`] is exact.
pub const EXACT_WILCOXON_LIMIT: usize = 25;

/// Average ranks (1-based) of `values`, ties within [`TIE_TOLERANCE`]
/// sharing the mean of their positions. Returns the ranks in input order and
/// the tie group sizes.
fn average_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut groups = Vec::new();
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && values[idx[j]] - values[idx[j - 1]] <= TIE_TOLERANCE * values[idx[j]].abs().max(1.0) {
            j += 1;
        }
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &idx[i..j] {
            ranks[k] = avg;
        }
        groups.push(j - i);
        i = j;
    }
    (ranks, groups)
}

/// Wilcoxon signed-rank test for matched pairs with [`WilcoxonMethod::Auto`].
pub fn wilcoxon_matched_pairs(x: &[f64], y: &[f64], alpha: f64) -> Result<SignificanceReport, StatsError> {
    wilcoxon(x, y, WilcoxonMethod::Auto, alpha)
}

/// Signed-rank test on `x - y`. Zero differences are dropped and tied
/// absolute differences get average ranks. The statistic is
/// `min(W+, W-)`.
///
/// The exact two-sided p-value is twice the smaller tail of the null
/// distribution of `W+` over all `2^n` sign assignments (counted by dynamic
/// programming on doubled ranks, so ties are handled exactly). The normal
/// approximation uses a continuity correction and the tie-corrected
/// variance.
pub fn wilcoxon(x: &[f64], y: &[f64], method: WilcoxonMethod, alpha: f64) -> Result<SignificanceReport, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(StatsError::TooFewPairs(0));
    }
    let effect = mean_of(&x.iter().zip(y).map(|(a, b)| a - b).collect::<Vec<_>>());
    let diffs: Vec<f64> = x
        .iter()
        .zip(y)
        .filter(|(a, b)| (*a - *b).abs() > TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0))
        .map(|(a, b)| a - b)
        .collect();
    let n = diffs.len();
    if n < 5 {
        return Err(StatsError::TooFewPairs(n));
    }
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, groups) = average_ranks(&abs);
    let w_plus: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let total = (n * (n + 1)) as f64 / 2.0;
    let statistic = w_plus.min(total - w_plus);

    let exact = match method {
        WilcoxonMethod::Auto => n <= EXACT_WILCOXON_LIMIT,
        WilcoxonMethod::Exact => true,
        WilcoxonMethod::Normal => false,
    };
    let p = if exact {
        let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
        let max: usize = doubled.iter().sum();
        // ways[s]: sign assignments whose positive doubled ranks sum to s
        let mut ways = vec![0f64; max + 1];
        ways[0] = 1.0;
        for &r in &doubled {
            for s in (r..=max).rev() {
                ways[s] += ways[s - r];
            }
        }
        let observed = (2.0 * w_plus).round() as usize;
        let all = 2f64.powi(n as i32);
        let lower: f64 = ways[..=observed].iter().sum::<f64>() / all;
        let upper: f64 = ways[observed..].iter().sum::<f64>() / all;
        (2.0 * lower.min(upper)).min(1.0)
    } else {
        let mean = total / 2.0;
        let ties: f64 = groups.iter().map(|&t| (t * t * t - t) as f64).sum();
        let var = (n * (n + 1) * (2 * n + 1)) as f64 / 24.0 - ties / 48.0;
        let z = ((w_plus - mean).abs() - 0.5).max(0.0) / var.sqrt();
        let normal = Normal::standard();
        2.0 * normal.sf(z)
    };
    let name = if exact { "wilcoxon-exact" } else { "wilcoxon-normal" };
    Ok(SignificanceReport::new(name, statistic, p, effect, None, None, n, alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TTestMode {
    Paired,
    UnpairedPooled,
}

/// Student t-test, two-sided. The effect is `mean(x) - mean(y)`.
pub fn t_test(x: &[f64], y: &[f64], mode: TTestMode, alpha: f64) -> Result<SignificanceReport, StatsError> {
    let (effect, se, df, n, name) = match mode {
        TTestMode::Paired => {
            if x.len() != y.len() {
                return Err(StatsError::LengthMismatch(x.len(), y.len()));
            }
            if x.len() < 2 {
                return Err(StatsError::TooFewValues);
            }
            let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            let s = descriptive(&d)?;
            let n = d.len();
            (s.mean, s.sd.unwrap_or(0.0) / (n as f64).sqrt(), (n - 1) as f64, n, "t-test-paired")
        }
        TTestMode::UnpairedPooled => {
            if x.len() < 2 || y.len() < 2 {
                return Err(StatsError::TooFewValues);
            }
            let (a, b) = (descriptive(x)?, descriptive(y)?);
            let (n1, n2) = (x.len() as f64, y.len() as f64);
            let df = n1 + n2 - 2.0;
            let (sa, sb) = (a.sd.unwrap_or(0.0), b.sd.unwrap_or(0.0));
            let pooled = ((n1 - 1.0) * sa * sa + (n2 - 1.0) * sb * sb) / df;
            let se = (pooled * (1.0 / n1 + 1.0 / n2)).sqrt();
            (a.mean - b.mean, se, df, x.len() + y.len(), "t-test-unpaired-pooled")
        }
    };
    let (t, p) = if se == 0.0 {
        if effect == 0.0 {
            (0.0, 1.0)
        } else {
            (effect.signum() * f64::INFINITY, 0.0)
        }
    } else {
        let t = effect / se;
        let dist = StudentsT::new(0.0, 1.0, df).expect("df is positive");
        (t, 2.0 * dist.sf(t.abs()))
    };
    Ok(SignificanceReport::new(name, t, p, effect, Some(se), Some(df), n, alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IccReport {
    /// ICC(A,1).
    pub icc_single: f64,
    /// ICC(A,k).
    pub icc_average: f64,
    pub model: String,
    pub subjects: usize,
    pub raters: usize,
    pub ms_rows: f64,
    pub ms_columns: f64,
    pub ms_error: f64,
}

/// Two-way, absolute-agreement intraclass correlation for a
/// subjects x raters matrix (rows are subjects).
pub fn icc_two_way_absolute(matrix: &[Vec<f64>]) -> Result<IccReport, StatsError> {
    let n = matrix.len();
    if n < 2 {
        return Err(StatsError::IncompleteMatrix(format!("{n} subjects, at least 2 are needed")));
    }
    let k = matrix[0].len();
    if k < 2 {
        return Err(StatsError::IncompleteMatrix(format!("{k} raters, at least 2 are needed")));
    }
    if let Some(i) = matrix.iter().position(|r| r.len() != k) {
        return Err(StatsError::IncompleteMatrix(format!("row {i} has {} values, expected {k}", matrix[i].len())));
    }
    if matrix.iter().flatten().any(|v| !v.is_finite()) {
        return Err(StatsError::IncompleteMatrix("non-finite value".into()));
    }
    let row_means: Vec<f64> = matrix.iter().map(|r| mean_of(r)).collect();
    let col_means: Vec<f64> = (0..k).map(|j| mean_of(&matrix.iter().map(|r| r[j]).collect::<Vec<_>>())).collect();
    let grand = mean_of(&col_means);
    let ss_rows = k as f64 * row_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let ss_cols = n as f64 * col_means.iter().map(|m| (m - grand).powi(2)).sum::<f64>();
    let mut ss_err = 0.0;
    for (i, row) in matrix.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            ss_err += (v - row_means[i] - col_means[j] + grand).powi(2);
        }
    }
    let (nf, kf) = (n as f64, k as f64);
    let msr = ss_rows / (nf - 1.0);
    let msc = ss_cols / (kf - 1.0);
    let mse = ss_err / ((nf - 1.0) * (kf - 1.0));
    let single_den = msr + (kf - 1.0) * mse + kf / nf * (msc - mse);
    let average_den = msr + (msc - mse) / nf;
    if single_den == 0.0 || average_den == 0.0 || (msr == 0.0 && mse == 0.0) {
        return Err(StatsError::DegenerateVariance);
    }
    Ok(IccReport {
        icc_single: (msr - mse) / single_den,
        icc_average: (msr - mse) / average_den,
        model: "two-way random, absolute agreement".into(),
        subjects: n,
        raters: k,
        ms_rows: msr,
        ms_columns: msc,
        ms_error: mse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_value_has_no_sd() {
        let d = descriptive(&[5.0]).unwrap();
        assert_eq!((d.n, d.mean, d.sd, d.min, d.max), (1, 5.0, None, 5.0, 5.0));
        assert_eq!(descriptive(&[]), Err(StatsError::EmptyInput));
    }

    #[test]
    fn sample_sd() {
        let d = descriptive(&[2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_eq!(d.mean, 5.0);
        assert!((d.sd.unwrap() - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn wilcoxon_rejects_identical_samples() {
        let x = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert_eq!(wilcoxon_matched_pairs(&x, &x, 0.05), Err(StatsError::TooFewPairs(0)));
        assert!(matches!(wilcoxon_matched_pairs(&x, &x[..5], 0.05), Err(StatsError::LengthMismatch(6, 5))));
    }

    #[test]
    fn wilcoxon_all_positive_exact() {
        // all 6 differences positive: p = 2 / 2^6
        let x = [2.0, 3.0, 4.5, 6.0, 8.0, 11.0];
        let y = [1.0; 6];
        let r = wilcoxon(&x, &y, WilcoxonMethod::Exact, 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 2.0 / 64.0).abs() < 1e-15);
        assert!(r.significant);
    }

    #[test]
    fn ranks_average_ties() {
        let (r, g) = average_ranks(&[3.0, 1.0, 3.0, 2.0]);
        assert_eq!(r, vec![3.5, 1.0, 3.5, 2.0]);
        assert_eq!(g, vec![1, 1, 2]);
    }

    #[test]
    fn paired_identical_samples() {
        let x = [1.0, 2.0, 3.5];
        let r = t_test(&x, &x, TTestMode::Paired, 0.05).unwrap();
        assert_eq!((r.effect, r.p_value, r.significant), (0.0, 1.0, false));
    }

    #[test]
    fn t_test_errors() {
        assert_eq!(t_test(&[1.0], &[1.0, 2.0], TTestMode::UnpairedPooled, 0.05), Err(StatsError::TooFewValues));
        assert_eq!(t_test(&[1.0, 2.0], &[1.0], TTestMode::Paired, 0.05), Err(StatsError::LengthMismatch(2, 1)));
    }

    #[test]
    fn perfect_agreement_icc_is_one() {
        let m: Vec<Vec<f64>> = [0.1, 7.3, 2.9, 5.55].iter().map(|&v| vec![v; 3]).collect();
        let r = icc_two_way_absolute(&m).unwrap();
        assert_eq!((r.icc_single, r.icc_average), (1.0, 1.0));
    }

    #[test]
    fn icc_degenerate_and_incomplete() {
        assert_eq!(icc_two_way_absolute(&[vec![2.0; 3], vec![2.0; 3]]), Err(StatsError::DegenerateVariance));
        assert!(matches!(icc_two_way_absolute(&[vec![1.0, 2.0], vec![1.0]]), Err(StatsError::IncompleteMatrix(_))));
        assert!(matches!(icc_two_way_absolute(&[vec![1.0, 2.0]]), Err(StatsError::IncompleteMatrix(_))));
    }
}
