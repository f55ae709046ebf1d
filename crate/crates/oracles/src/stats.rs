//! Test statistics computed from their textbook definitions.

/// Exact two-sided signed-rank p-value by listing all 2^n sign patterns.
/// Zero differences must already be removed; ties share average ranks.
pub fn wilcoxon_exact_p(diffs: &[f64]) -> f64 {
    let n = diffs.len();
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks: Vec<f64> = abs
        .iter()
        .map(|a| {
            let below = abs.iter().filter(|b| *b < a).count() as f64;
            let equal = abs.iter().filter(|b| *b == a).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let observed: f64 = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).map(|(_, r)| r).sum();
    let (mut le, mut ge) = (0u64, 0u64);
    for mask in 0u64..(1 << n) {
        let w: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| ranks[i]).sum();
        if w <= observed + 1e-9 {
            le += 1;
        }
        if w >= observed - 1e-9 {
            ge += 1;
        }
    }
    let total = (1u64 << n) as f64;
    (2.0 * le.min(ge) as f64 / total).min(1.0)
}

/// (ICC(A,1), ICC(A,k)) using the computational sums-of-squares formulas,
/// with the error term obtained by subtraction.
pub fn icc_a(matrix: &[Vec<f64>]) -> (f64, f64) {
    let n = matrix.len() as f64;
    let k = matrix[0].len() as f64;
    let total: f64 = matrix.iter().flatten().sum();
    let correction = total * total / (n * k);
    let ss_total = matrix.iter().flatten().map(|v| v * v).sum::<f64>() - correction;
    let ss_rows = matrix.iter().map(|r| r.iter().sum::<f64>().powi(2)).sum::<f64>() / k - correction;
    let ss_cols = (0..matrix[0].len()).map(|j| matrix.iter().map(|r| r[j]).sum::<f64>().powi(2)).sum::<f64>() / n
        - correction;
    let ss_err = ss_total - ss_rows - ss_cols;
    let msr = ss_rows / (n - 1.0);
    let msc = ss_cols / (k - 1.0);
    let mse = ss_err / ((n - 1.0) * (k - 1.0));
    let single = (msr - mse) / (msr + (k - 1.0) * mse + k * (msc - mse) / n);
    let average = (msr - mse) / (msr + (msc - mse) / n);
    (single, average)
}
