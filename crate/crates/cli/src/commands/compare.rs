use std::path::Path;

use mtkit::metrics::Metric;
use mtkit::stats::{icc_two_way_absolute, t_test, wilcoxon_matched_pairs, IccReport, ScoreTable, SignificanceReport, TTestMode};
use serde::{Deserialize, Serialize};

use super::{Context, Inputs};
use crate::args::{CompareArgs, TestKind};
use crate::error::CliError;
use crate::output::{cell, Envelope, Tabular};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableInfo {
    pub name: String,
    pub systems: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledSignificance {
    pub label: String,
    pub report: SignificanceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabeledIcc {
    pub label: String,
    pub report: IccReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareReport {
    pub test: TestKind,
    pub alpha: f64,
    pub paired: bool,
    pub tables: Vec<TableInfo>,
    pub significance: Vec<LabeledSignificance>,
    pub icc: Vec<LabeledIcc>,
}

pub(crate) fn significance_rows(rows: &[LabeledSignificance]) -> Vec<String> {
    let mut out = vec!["label\ttest\tn\tstatistic\teffect\tstandard_error\tp_value\tsignificant".to_owned()];
    for r in rows {
        let s = &r.report;
        out.push(format!(
            "{}\t{}\t{}\t{:.4}\t{:.4}\t{}\t{:.4}\t{}",
            r.label,
            s.test,
            s.n,
            s.statistic,
            s.effect,
            cell(s.standard_error, 4),
            s.p_value,
            s.significant
        ));
    }
    out
}

impl Tabular for CompareReport {
    fn rows(&self) -> Vec<String> {
        if self.test != TestKind::Icc {
            return significance_rows(&self.significance);
        }
        let mut out = vec!["label\tsubjects\traters\ticc_single\ticc_average".to_owned()];
        for r in &self.icc {
            let i = &r.report;
            out.push(format!("{}\t{}\t{}\t{:.4}\t{:.4}", r.label, i.subjects, i.raters, i.icc_single, i.icc_average));
        }
        out
    }
}

/// BLEU against each other metric over the systems of one table.
pub(crate) fn wilcoxon_rows(table: &ScoreTable, alpha: f64) -> Result<Vec<LabeledSignificance>, CliError> {
    let bleu = table.column(Metric::Bleu);
    [Metric::Nist, Metric::Meteor, Metric::Ter]
        .into_iter()
        .map(|m| {
            Ok(LabeledSignificance {
                label: format!("{}:bleu-vs-{m}", table.name()),
                report: wilcoxon_matched_pairs(&bleu, &table.column(m), alpha)?,
            })
        })
        .collect()
}

/// Values of `metric` for the systems present in both tables, in the order
/// of the first table.
fn common_columns(a: &ScoreTable, b: &ScoreTable, metric: Metric) -> (Vec<f64>, Vec<f64>) {
    a.rows()
        .iter()
        .filter_map(|r| b.get(&r.system).map(|o| (r.get(metric), o.get(metric))))
        .unzip()
}

fn load(inputs: &mut Inputs, index: usize, path: &Path) -> Result<ScoreTable, CliError> {
    let bytes = inputs.read(&format!("table{}", index + 1), path)?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Validation(format!("{}: table is not UTF-8", path.display())))?;
    let name = path.file_stem().map_or_else(|| format!("table{}", index + 1), |s| s.to_string_lossy().into_owned());
    ScoreTable::from_csv(name, &text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn compare(args: &CompareArgs, ctx: &Context) -> Result<Envelope<CompareReport>, CliError> {
    let mut section = ctx.config.compare.clone();
    if args.test.is_some() {
        section.test = args.test;
    }
    if let Some(a) = args.alpha {
        section.alpha = a;
    }
    section.paired |= args.paired;
    let test = section.test.ok_or_else(|| CliError::Validation("no test selected; use --test".into()))?;
    if !(section.alpha > 0.0 && section.alpha < 1.0) {
        return Err(CliError::Validation(format!("alpha must lie in (0, 1), got {}", section.alpha)));
    }
    let alpha = section.alpha;

    let mut inputs = Inputs::default();
    let tables: Vec<ScoreTable> =
        args.tables.iter().enumerate().map(|(i, p)| load(&mut inputs, i, p)).collect::<Result<_, _>>()?;

    let mut significance = Vec::new();
    let mut icc = Vec::new();
    match (test, tables.as_slice()) {
        (TestKind::Wilcoxon, _) => {
            for t in &tables {
                significance.extend(wilcoxon_rows(t, alpha)?);
            }
        }
        (TestKind::Ttest, [a, b]) => {
            for m in Metric::ALL {
                let report = if section.paired {
                    let (x, y) = common_columns(a, b, m);
                    t_test(&x, &y, TTestMode::Paired, alpha)?
                } else {
                    t_test(&a.column(m), &b.column(m), TTestMode::UnpairedPooled, alpha)?
                };
                significance.push(LabeledSignificance { label: format!("{}-vs-{}:{m}", a.name(), b.name()), report });
            }
        }
        (TestKind::Ttest, _) => return Err(CliError::Validation("the t-test compares two tables".into())),
        (TestKind::Icc, [t]) => {
            let matrix: Vec<Vec<f64>> =
                t.rows().iter().map(|r| Metric::ALL.iter().map(|&m| r.get(m)).collect()).collect();
            icc.push(LabeledIcc { label: format!("{}:metrics", t.name()), report: icc_two_way_absolute(&matrix)? });
        }
        (TestKind::Icc, [a, b]) => {
            for m in Metric::ALL {
                let (x, y) = common_columns(a, b, m);
                let matrix: Vec<Vec<f64>> = x.into_iter().zip(y).map(|(p, q)| vec![p, q]).collect();
                icc.push(LabeledIcc {
                    label: format!("{}-vs-{}:{m}", a.name(), b.name()),
                    report: icc_two_way_absolute(&matrix)?,
                });
            }
        }
        (TestKind::Icc, _) => unreachable!("clap limits the table count to 1..=2"),
    }

    let report = CompareReport {
        test,
        alpha,
        paired: section.paired,
        tables: tables.iter().map(|t| TableInfo { name: t.name().to_owned(), systems: t.len() }).collect(),
        significance,
        icc,
    };
    let options = serde_json::json!({ "test": test, "alpha": alpha, "paired": section.paired });
    Ok(ctx.envelope("compare", &options, &inputs, report))
}
