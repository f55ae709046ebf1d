#![allow(dead_code)]

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::Command;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub struct Run {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

impl Run {
    pub fn text(&self) -> String {
        String::from_utf8(self.stdout.clone()).expect("stdout is UTF-8")
    }
}

pub fn mtkit<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let out = Command::new(env!("CARGO_BIN_EXE_mtkit")).args(&args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: out.stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// One invocation per subcommand, in an order where later ones can read
/// the files earlier ones wrote. Each entry lists the files it writes.
pub fn invocations(dir: &Path) -> Vec<(&'static str, Vec<OsString>, Vec<PathBuf>)> {
    let f = |n: &str| fixture(n).into_os_string();
    let o = |n: &str| dir.join(n);
    let s = |x: &str| OsString::from(x);
    let a_lm = o("a.lm");
    let b_lm = o("b.lm");
    vec![
        (
            "clean",
            vec![s("clean"), f("clean.src"), f("clean.tgt"), s("--out-source"), o("c.src").into(), s("--out-target"), o("c.tgt").into()],
            vec![o("c.src"), o("c.tgt")],
        ),
        ("tokenize", vec![s("tokenize"), f("raw.txt"), s("--output"), o("tok.txt").into()], vec![o("tok.txt")]),
        (
            "truecase",
            vec![s("truecase"), s("--train"), f("truecase_train.txt"), f("truecase_in.txt"), s("--output"), o("tc.txt").into()],
            vec![o("tc.txt")],
        ),
        (
            "split-compounds",
            vec![s("split-compounds"), f("compound.txt"), s("--output"), o("split.txt").into()],
            vec![o("split.txt")],
        ),
        (
            "symmetrize",
            vec![s("symmetrize"), s("--heuristic"), s("grow-diag-final"), f("fwd.align"), f("rev.align"), s("--output"), o("sym.align").into()],
            vec![o("sym.align")],
        ),
        (
            "lm-train",
            vec![s("lm-train"), f("lm_train.txt"), s("--order"), s("3"), s("--output"), a_lm.clone().into()],
            vec![a_lm.clone()],
        ),
        (
            "lm-train",
            vec![s("lm-train"), f("lm_other.txt"), s("--order"), s("3"), s("--smoothing"), s("wb"), s("--output"), b_lm.clone().into()],
            vec![b_lm.clone()],
        ),
        (
            "lm-ppl",
            vec![s("lm-ppl"), s("--model"), a_lm.into(), s("--model"), b_lm.into(), s("--tune-on"), f("lm_heldout.txt"), f("lm_test.txt")],
            vec![],
        ),
        ("score", vec![s("score"), s("--band"), f("cand.txt"), f("ref1.txt"), f("ref2.txt")], vec![]),
        ("compare", vec![s("compare"), s("--test"), s("wilcoxon"), f("pl_en.csv"), f("en_pl.csv")], vec![]),
        ("compare", vec![s("compare"), s("--test"), s("ttest"), f("pl_en.csv"), f("en_pl.csv")], vec![]),
        ("compare", vec![s("compare"), s("--test"), s("icc"), f("pl_en.csv"), f("en_pl.csv")], vec![]),
        ("reproduce-paper", vec![s("reproduce-paper")], vec![]),
    ]
}
