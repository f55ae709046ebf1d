use mtkit::metrics::{interpretability_band, Band, Metric};
use mtkit::stats::{
    descriptive, icc_two_way_absolute, t_test, ScoreTable, SignificanceReport, TTestMode, DEFAULT_ALPHA,
};
use serde::{Deserialize, Serialize};

use super::compare::{significance_rows, wilcoxon_rows};
use super::{Context, Inputs, LabeledIcc, LabeledSignificance};
use crate::error::CliError;
use crate::output::{sha256_hex, Envelope, InputDigest, Tabular};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeanRow {
    pub table: String,
    pub metric: Metric,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Check {
    pub name: String,
    pub value: f64,
    /// Band label for band checks.
    pub label: Option<String>,
    pub expected: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReproduceReport {
    pub means: Vec<MeanRow>,
    pub wilcoxon: Vec<LabeledSignificance>,
    pub ter_ttest: SignificanceReport,
    /// Per metric, the two directions as raters over the shared systems.
    pub icc: Vec<LabeledIcc>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Tabular for ReproduceReport {
    fn rows(&self) -> Vec<String> {
        let mut rows = vec!["table\tmetric\tmean".to_owned()];
        rows.extend(self.means.iter().map(|m| format!("{}\t{}\t{:.4}", m.table, m.metric, m.mean)));
        rows.extend(significance_rows(&self.wilcoxon));
        rows.extend(significance_rows(&[LabeledSignificance {
            label: "pl-en-vs-en-pl:ter".into(),
            report: self.ter_ttest.clone(),
        }]));
        rows.push("label\tsubjects\traters\ticc_single\ticc_average".into());
        for r in &self.icc {
            let i = &r.report;
            rows.push(format!("{}\t{}\t{}\t{:.4}\t{:.4}", r.label, i.subjects, i.raters, i.icc_single, i.icc_average));
        }
        rows.push("check\tvalue\texpected\tresult".into());
        for c in &self.checks {
            let value = match &c.label {
                Some(l) => format!("{:.2} {l}", c.value),
                None => format!("{:.4}", c.value),
            };
            rows.push(format!("{}\t{value}\t{}\t{}", c.name, c.expected, if c.pass { "PASS" } else { "FAIL" }));
        }
        rows
    }
}

fn within(name: &str, value: f64, target: f64, tol: f64) -> Check {
    Check {
        name: name.into(),
        value,
        label: None,
        expected: format!("{target} +/- {tol}"),
        pass: (value - target).abs() <= tol + 1e-12,
    }
}

/// Statistics of the two bundled score tables, each checked against the
/// published value or finding.
pub fn reproduce_paper(ctx: &Context) -> Result<Envelope<ReproduceReport>, CliError> {
    let tables = [ScoreTable::pl_en(), ScoreTable::en_pl()];
    let mut means = Vec::new();
    for t in &tables {
        for m in Metric::ALL {
            means.push(MeanRow { table: t.name().into(), metric: m, mean: descriptive(&t.column(m))?.mean });
        }
    }
    let mean = |table: &str, metric: Metric| {
        means.iter().find(|r| r.table == table && r.metric == metric).map(|r| r.mean).expect("mean computed")
    };

    let mut checks = vec![
        within("pl-en meteor mean", mean("pl-en", Metric::Meteor), 82.72, 0.01),
        within("pl-en nist mean", mean("pl-en", Metric::Nist), 70.58, 0.10),
        within("en-pl meteor mean", mean("en-pl", Metric::Meteor), 78.97, 0.01),
        within("en-pl nist mean", mean("en-pl", Metric::Nist), 67.58, 0.02),
    ];

    let mut wilcoxon = Vec::new();
    for t in &tables {
        wilcoxon.extend(wilcoxon_rows(t, DEFAULT_ALPHA)?);
    }
    for w in &wilcoxon {
        let expect_significant = !w.label.ends_with("-vs-ter");
        checks.push(Check {
            name: format!("wilcoxon {}", w.label),
            value: w.report.p_value,
            label: None,
            expected: if expect_significant { "p < 0.05".into() } else { "p >= 0.05".into() },
            pass: w.report.significant == expect_significant,
        });
    }

    let ter_ttest =
        t_test(&tables[0].column(Metric::Ter), &tables[1].column(Metric::Ter), TTestMode::UnpairedPooled, DEFAULT_ALPHA)?;
    checks.push(within("ter t-test difference", ter_ttest.effect, 2.50, 0.01));
    checks.push(Check {
        name: "ter t-test p".into(),
        value: ter_ttest.p_value,
        label: None,
        expected: "0.02 <= p <= 0.05".into(),
        pass: (0.02..=0.05).contains(&ter_ttest.p_value),
    });

    // lower ends of the published ICC ranges, given to four decimals
    let published = [
        (Metric::Bleu, 0.6531, 0.7901),
        (Metric::Nist, 0.4162, 0.5878),
        (Metric::Meteor, 0.3631, 0.5328),
        (Metric::Ter, 0.5666, 0.7233),
    ];
    let mut icc = Vec::new();
    for (m, single, average) in published {
        let matrix: Vec<Vec<f64>> = tables[0]
            .rows()
            .iter()
            .filter_map(|r| tables[1].get(&r.system).map(|o| vec![r.get(m), o.get(m)]))
            .collect();
        let report = icc_two_way_absolute(&matrix)?;
        let label = format!("pl-en-vs-en-pl:{m}");
        checks.push(within(&format!("icc {label} single"), report.icc_single, single, 5e-5));
        checks.push(within(&format!("icc {label} average"), report.icc_average, average, 5e-5));
        icc.push(LabeledIcc { label, report });
    }

    for t in &tables {
        for r in t.rows() {
            let band = interpretability_band(r.bleu)?;
            checks.push(Check {
                name: format!("band {}/{}", t.name(), r.system),
                value: r.bleu,
                label: Some(band.name().into()),
                expected: Band::GoodFluent.name().into(),
                pass: band == Band::GoodFluent,
            });
        }
    }

    let passed = checks.iter().all(|c| c.pass);
    let report = ReproduceReport { means, wilcoxon, ter_ttest, icc, checks, passed };
    let inputs = Inputs(
        tables.iter().map(|t| InputDigest { role: t.name().into(), sha256: sha256_hex(t.to_csv().as_bytes()) }).collect(),
    );
    Ok(ctx.envelope("reproduce-paper", &serde_json::json!({ "alpha": DEFAULT_ALPHA }), &inputs, report))
}
