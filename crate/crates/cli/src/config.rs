//! Options file. Every section and key is optional; unknown keys are errors.

use std::path::Path;

use mtkit::text::CleanConfig;
use serde::{Deserialize, Serialize};

use crate::args::{Format, TestKind};
use crate::error::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FileConfig {
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub clean: CleanConfig,
    pub split: SplitSection,
    pub symmetrize: SymmetrizeSection,
    pub lm: LmSection,
    pub score: ScoreSection,
    pub compare: CompareSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SplitSection {
    pub min_part_len: usize,
    pub fillers: Vec<String>,
}

impl Default for SplitSection {
    fn default() -> Self {
        SplitSection { min_part_len: 3, fillers: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SymmetrizeSection {
    pub heuristic: String,
    pub transpose_reverse: bool,
}

impl Default for SymmetrizeSection {
    fn default() -> Self {
        SymmetrizeSection { heuristic: "grow-diag-final-and".into(), transpose_reverse: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LmSection {
    pub order: usize,
    pub smoothing: String,
    /// Grid step for mixture weight tuning.
    pub step: f64,
}

impl Default for LmSection {
    fn default() -> Self {
        LmSection { order: mtkit::lm::DEFAULT_ORDER, smoothing: "kneser-ney".into(), step: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScoreSection {
    /// Empty means all four metrics.
    pub metrics: Vec<String>,
    pub normalize: bool,
    pub band: bool,
    pub lowercase: bool,
    pub tokenize: bool,
    pub sentence_level: bool,
    pub bleu_order: usize,
    pub bleu_weights: Option<Vec<f64>>,
    pub nist_order: usize,
}

impl Default for ScoreSection {
    fn default() -> Self {
        ScoreSection {
            metrics: Vec::new(),
            normalize: true,
            band: false,
            lowercase: false,
            tokenize: false,
            sentence_level: false,
            bleu_order: 4,
            bleu_weights: None,
            nist_order: mtkit::metrics::NIST_DEFAULT_ORDER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareSection {
    pub test: Option<TestKind>,
    pub alpha: f64,
    pub paired: bool,
}

impl Default for CompareSection {
    fn default() -> Self {
        CompareSection { test: None, alpha: mtkit::stats::DEFAULT_ALPHA, paired: false }
    }
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}
