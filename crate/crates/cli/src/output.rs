use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::Format;

pub const TOOL: &str = "mtkit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDigest {
    pub role: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Hash of the effective options (paths excluded).
    pub config_sha256: String,
    pub inputs: Vec<InputDigest>,
}

impl Provenance {
    pub fn new(command: &str, options: &serde_json::Value, inputs: Vec<InputDigest>) -> Provenance {
        let canonical = serde_json::to_string(options).expect("options serialize");
        Provenance {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            config_sha256: sha256_hex(canonical.as_bytes()),
            inputs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope<R> {
    pub provenance: Provenance,
    pub report: R,
}

/// A report that can also be laid out as tab-separated rows.
pub trait Tabular {
    /// Column header followed by data rows, each without a trailing newline.
    fn rows(&self) -> Vec<String>;
}

pub fn render<R: Serialize + Tabular>(env: &Envelope<R>, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(env).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Tsv => {
            let p = &env.provenance;
            let mut s = String::new();
            writeln!(s, "# {} {} command={} config_sha256={}", p.tool, p.version, p.command, p.config_sha256).unwrap();
            for i in &p.inputs {
                writeln!(s, "# input {} sha256={}", i.role, i.sha256).unwrap();
            }
            for row in env.report.rows() {
                s.push_str(&row);
                s.push('\n');
            }
            s
        }
    }
}

/// Fixed-precision cell; `-` for absent values.
pub fn cell(v: Option<f64>, decimals: usize) -> String {
    match v {
        Some(x) => format!("{x:.decimals$}"),
        None => "-".into(),
    }
}
