use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::StatsError;
use crate::metrics::Metric;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreRow {
    pub system: String,
    pub bleu: f64,
    pub nist: f64,
    pub meteor: f64,
    pub ter: f64,
}

impl ScoreRow {
    pub fn get(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Bleu => self.bleu,
            Metric::Nist => self.nist,
            Metric::Meteor => self.meteor,
            Metric::Ter => self.ter,
        }
    }
}

/// Normalized (0-100) scores of several systems on the four metrics, one
/// row per system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreTable {
    name: String,
    rows: Vec<ScoreRow>,
}

const PL_EN: &str = include_str!("../../data/table1_pl_en.csv");
const EN_PL: &str = include_str!("../../data/table2_en_pl.csv");

impl ScoreTable {
    /// Parses CSV with the header `system,bleu,nist,meteor,ter`.
    pub fn from_csv(name: impl Into<String>, text: &str) -> Result<ScoreTable, StatsError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| StatsError::Table(e.to_string()))?.clone();
        let expected = ["system", "bleu", "nist", "meteor", "ter"];
        if header.iter().collect::<Vec<_>>() != expected {
            return Err(StatsError::Table(format!("header must be {}", expected.join(","))));
        }
        let mut rows = Vec::new();
        for (i, rec) in reader.deserialize::<ScoreRow>().enumerate() {
            rows.push(rec.map_err(|e| StatsError::Table(format!("row {}: {e}", i + 1)))?);
        }
        ScoreTable::new(name, rows)
    }

    pub fn new(name: impl Into<String>, rows: Vec<ScoreRow>) -> Result<ScoreTable, StatsError> {
        if rows.is_empty() {
            return Err(StatsError::Table("no rows".into()));
        }
        let mut seen = BTreeSet::new();
        for r in &rows {
            if !seen.insert(r.system.as_str()) {
                return Err(StatsError::Table(format!("duplicate system {:?}", r.system)));
            }
            for m in Metric::ALL {
                let v = r.get(m);
                if !(0.0..=100.0).contains(&v) {
                    return Err(StatsError::Table(format!("system {:?}: {m} score {v} outside [0, 100]", r.system)));
                }
            }
        }
        Ok(ScoreTable { name: name.into(), rows })
    }

    /// Polish to English results of the fourteen systems.
    pub fn pl_en() -> ScoreTable {
        ScoreTable::from_csv("pl-en", PL_EN).expect("bundled table is valid")
    }

    /// English to Polish results of the fifteen systems.
    pub fn en_pl() -> ScoreTable {
        ScoreTable::from_csv("en-pl", EN_PL).expect("bundled table is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rows(&self) -> &[ScoreRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, metric: Metric) -> Vec<f64> {
        self.rows.iter().map(|r| r.get(metric)).collect()
    }

    pub fn get(&self, system: &str) -> Option<&ScoreRow> {
        self.rows.iter().find(|r| r.system == system)
    }

    /// CSV in the same layout `from_csv` reads.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv output is utf-8")
    }
}
