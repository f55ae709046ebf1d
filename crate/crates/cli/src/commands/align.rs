use mtkit::alignment::{parse_alignment_with, parse_pair, symmetrize as combine, SymmetrizationHeuristic};
use serde::{Deserialize, Serialize};

use super::{parse_option, write_bytes, Context, Inputs};
use crate::args::SymmetrizeArgs;
use crate::error::CliError;
use crate::output::{Envelope, Tabular};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrizeReport {
    pub heuristic: SymmetrizationHeuristic,
    pub transpose_reverse: bool,
    pub sentences: usize,
    pub forward_points: usize,
    pub reverse_points: usize,
    pub output_points: usize,
    pub output_sha256: String,
}

impl Tabular for SymmetrizeReport {
    fn rows(&self) -> Vec<String> {
        vec![
            "heuristic\tsentences\tforward_points\treverse_points\toutput_points".into(),
            format!(
                "{}\t{}\t{}\t{}\t{}",
                self.heuristic, self.sentences, self.forward_points, self.reverse_points, self.output_points
            ),
        ]
    }
}

/// Smallest `(source_len, target_len)` covering every point on the line.
fn implied_lengths(line: &str, transpose: bool) -> Result<(usize, usize), CliError> {
    let (mut s, mut t) = (0, 0);
    for item in line.split_whitespace() {
        let (a, b) = parse_pair(item)?;
        let (a, b) = if transpose { (b, a) } else { (a, b) };
        s = s.max(a + 1);
        t = t.max(b + 1);
    }
    Ok((s, t))
}

pub fn symmetrize(args: &SymmetrizeArgs, ctx: &Context) -> Result<Envelope<SymmetrizeReport>, CliError> {
    let mut section = ctx.config.symmetrize.clone();
    if let Some(h) = &args.heuristic {
        section.heuristic = h.clone();
    }
    if args.transpose_reverse {
        section.transpose_reverse = true;
    }
    let heuristic: SymmetrizationHeuristic = parse_option("heuristic", &section.heuristic)?;

    let mut inputs = Inputs::default();
    let fwd = inputs.lines("forward", &args.forward)?;
    let rev = inputs.lines("reverse", &args.reverse)?;
    if fwd.len() != rev.len() {
        return Err(CliError::Validation(format!(
            "alignment files differ in length: {} forward vs {} reverse lines",
            fwd.len(),
            rev.len()
        )));
    }
    let lengths: Option<Vec<(usize, usize)>> = match (&args.source, &args.target) {
        (Some(s), Some(t)) => {
            let src = inputs.tokenized("source", s)?;
            let tgt = inputs.tokenized("target", t)?;
            if src.len() != fwd.len() || tgt.len() != fwd.len() {
                return Err(CliError::Validation(format!(
                    "{} alignment lines but {} source and {} target sentences",
                    fwd.len(),
                    src.len(),
                    tgt.len()
                )));
            }
            Some(src.iter().zip(&tgt).map(|(a, b)| (a.len(), b.len())).collect())
        }
        _ => None,
    };

    let mut text = String::new();
    let (mut nf, mut nr, mut no) = (0, 0, 0);
    for (i, (f, r)) in fwd.iter().zip(&rev).enumerate() {
        let (sl, tl) = match &lengths {
            Some(l) => l[i],
            None => {
                let a = implied_lengths(f.text(), false)?;
                let b = implied_lengths(r.text(), section.transpose_reverse)?;
                (a.0.max(b.0), a.1.max(b.1))
            }
        };
        let at_line = |e: mtkit::alignment::AlignmentError| CliError::Validation(format!("line {}: {e}", i + 1));
        let fa = parse_alignment_with(f.text(), sl, tl, false).map_err(at_line)?;
        let ra = parse_alignment_with(r.text(), sl, tl, section.transpose_reverse).map_err(at_line)?;
        let out = combine(&fa, &ra, heuristic).map_err(at_line)?;
        nf += fa.len();
        nr += ra.len();
        no += out.len();
        text.push_str(&out.to_pharaoh());
        text.push('\n');
    }

    let report = SymmetrizeReport {
        heuristic,
        transpose_reverse: section.transpose_reverse,
        sentences: fwd.len(),
        forward_points: nf,
        reverse_points: nr,
        output_points: no,
        output_sha256: write_bytes(&args.output, text.as_bytes())?,
    };
    let options = serde_json::json!({ "heuristic": heuristic, "transpose_reverse": section.transpose_reverse });
    Ok(ctx.envelope("symmetrize", &options, &inputs, report))
}
