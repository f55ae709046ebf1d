use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestKind {
    Wilcoxon,
    Ttest,
    Icc,
}

/// SMT experiment toolkit: corpus preparation, alignment symmetrization,
/// n-gram language models, MT metrics and system comparison.
#[derive(Debug, Parser)]
#[command(name = "mtkit", version)]
pub struct Cli {
    /// Report format on stdout.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON file with default options; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Recorded in the provenance header; no command draws random numbers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Filter a whitespace-tokenized parallel corpus.
    Clean(CleanArgs),
    /// Normalize punctuation and tokenize raw text.
    Tokenize(TokenizeArgs),
    /// Restore the case of sentence-initial tokens.
    Truecase(TruecaseArgs),
    /// Split compounds by corpus frequency.
    SplitCompounds(SplitArgs),
    /// Combine two directed word alignments.
    Symmetrize(SymmetrizeArgs),
    /// Estimate an n-gram language model.
    LmTrain(LmTrainArgs),
    /// Perplexity of one model or a linear mixture.
    LmPpl(LmPplArgs),
    /// Score candidate translations against references.
    Score(ScoreArgs),
    /// Significance tests and ICC on score tables.
    Compare(CompareArgs),
    /// Recompute the published table statistics and check them.
    ReproducePaper,
}

#[derive(Debug, clap::Args)]
pub struct CleanArgs {
    pub source: PathBuf,
    pub target: PathBuf,
    #[arg(long)]
    pub out_source: PathBuf,
    #[arg(long)]
    pub out_target: PathBuf,
    #[arg(long)]
    pub max_tokens: Option<usize>,
    #[arg(long)]
    pub max_length_ratio: Option<f64>,
    #[arg(long)]
    pub foreign_char_ratio: Option<f64>,
    #[arg(long)]
    pub keep_duplicates: bool,
    #[arg(long)]
    pub require_terminal_punct: bool,
    #[arg(long)]
    pub source_script: Option<String>,
    #[arg(long)]
    pub target_script: Option<String>,
}

#[derive(Debug, clap::Args)]
pub struct TokenizeArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct TruecaseArgs {
    /// Tokenized training corpus.
    #[arg(long)]
    pub train: PathBuf,
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct SplitArgs {
    pub input: PathBuf,
    /// Corpus to count token frequencies on; defaults to the input.
    #[arg(long)]
    pub frequencies: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub min_part_len: Option<usize>,
    /// Linking element allowed between parts (repeatable).
    #[arg(long = "filler")]
    pub fillers: Vec<String>,
}

#[derive(Debug, clap::Args)]
pub struct SymmetrizeArgs {
    pub forward: PathBuf,
    pub reverse: PathBuf,
    #[arg(long)]
    pub heuristic: Option<String>,
    /// Read the reverse file as target-source pairs.
    #[arg(long)]
    pub transpose_reverse: bool,
    /// Tokenized source side, for sentence lengths.
    #[arg(long, requires = "target")]
    pub source: Option<PathBuf>,
    #[arg(long, requires = "source")]
    pub target: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct LmTrainArgs {
    pub corpus: PathBuf,
    #[arg(long)]
    pub order: Option<usize>,
    /// witten-bell (wb) or kneser-ney (kn).
    #[arg(long)]
    pub smoothing: Option<String>,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct LmPplArgs {
    /// Model file written by lm-train (repeatable for a mixture).
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
    /// Comma-separated mixture weights.
    #[arg(long, value_delimiter = ',', conflicts_with = "tune_on")]
    pub weights: Option<Vec<f64>>,
    /// Held-out corpus for grid-searching the mixture weights.
    #[arg(long)]
    pub tune_on: Option<PathBuf>,
    #[arg(long)]
    pub step: Option<f64>,
    pub test: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct ScoreArgs {
    /// bleu, nist, meteor or ter (repeatable); all four when absent.
    #[arg(long = "metric")]
    pub metrics: Vec<String>,
    /// Fill the 0-100 column.
    #[arg(long)]
    pub normalize: bool,
    /// Fill the interpretability band column.
    #[arg(long)]
    pub band: bool,
    #[arg(long)]
    pub lowercase: bool,
    /// Tokenize raw input instead of splitting on whitespace.
    #[arg(long)]
    pub tokenize: bool,
    /// Sentence-level geometric-mean BLEU.
    #[arg(long)]
    pub sentence_level: bool,
    #[arg(long)]
    pub bleu_order: Option<usize>,
    #[arg(long)]
    pub nist_order: Option<usize>,
    pub candidate: PathBuf,
    #[arg(required = true)]
    pub references: Vec<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub test: Option<TestKind>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Paired t-test on the systems both tables share.
    #[arg(long)]
    pub paired: bool,
    #[arg(required = true, num_args = 1..=2)]
    pub tables: Vec<PathBuf>,
}
