mod align;
mod compare;
mod corpus;
mod lm;
mod reproduce;
mod score;

use std::path::Path;

use mtkit::text::{read_lines, RawLine, TokenizedSentence};
use serde::Serialize;

use crate::config::FileConfig;
use crate::error::CliError;
use crate::output::{sha256_hex, Envelope, InputDigest, Provenance};

pub use align::{symmetrize, SymmetrizeReport};
pub use compare::{compare, CompareReport, LabeledIcc, LabeledSignificance, TableInfo};
pub use corpus::{clean, split_compounds, tokenize, truecase, CleanReport, Dropped, SplitReport, TokenizeReport, TruecaseReport};
pub use lm::{lm_ppl, lm_train, LmPplReport, LmTrainReport};
pub use reproduce::{reproduce_paper, Check, MeanRow, ReproduceReport};
pub use score::{score, MetricRow, ScoreReport};

/// Settings shared by every command.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub config: FileConfig,
    pub seed: Option<u64>,
}

impl Context {
    fn envelope<R, O: Serialize>(&self, command: &str, options: &O, inputs: &Inputs, report: R) -> Envelope<R> {
        let options = serde_json::json!({ "options": options, "seed": self.seed });
        Envelope { provenance: Provenance::new(command, &options, inputs.0.clone()), report }
    }
}

/// Digests of every file a command read, in reading order.
#[derive(Debug, Default)]
struct Inputs(Vec<InputDigest>);

impl Inputs {
    fn read(&mut self, role: &str, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
        self.0.push(InputDigest { role: role.into(), sha256: sha256_hex(&bytes) });
        Ok(bytes)
    }

    fn lines(&mut self, role: &str, path: &Path) -> Result<Vec<RawLine>, CliError> {
        let bytes = self.read(role, path)?;
        read_lines(&bytes).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
    }

    /// Lines split on whitespace.
    fn tokenized(&mut self, role: &str, path: &Path) -> Result<Vec<TokenizedSentence>, CliError> {
        Ok(self.lines(role, path)?.iter().map(|l| TokenizedSentence::from_whitespace(l.text())).collect())
    }
}

/// Writes one sentence per line and returns the digest of what was written.
fn write_sentences<'a, I>(path: &Path, sentences: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = &'a TokenizedSentence>,
{
    let mut text = String::new();
    for s in sentences {
        text.push_str(&s.to_string());
        text.push('\n');
    }
    write_bytes(path, text.as_bytes())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<String, CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(bytes))
}

fn parse_option<T: std::str::FromStr>(what: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| CliError::Validation(format!("{what}: {e}")))
}
