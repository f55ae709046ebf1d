mod common;

use std::ffi::OsString;

use common::{fixture, invocations, mtkit};
use mtkit::metrics::{Band, Metric};
use mtkit::text::DropReason;
use mtkit_cli::commands::{
    CleanReport, CompareReport, LmPplReport, LmTrainReport, ReproduceReport, ScoreReport, SplitReport, SymmetrizeReport,
    TokenizeReport, TruecaseReport,
};
use mtkit_cli::output::Envelope;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn json_args(args: &[OsString]) -> Vec<OsString> {
    let mut v = args.to_vec();
    v.push("--format".into());
    v.push("json".into());
    v
}

fn parse<R: DeserializeOwned>(stdout: &[u8]) -> Envelope<R> {
    serde_json::from_slice(stdout).expect("output matches the report schema")
}

fn assert_round_trip<R: Serialize + DeserializeOwned>(stdout: &[u8]) {
    let env: Envelope<R> = parse(stdout);
    let mut again = serde_json::to_string_pretty(&env).unwrap();
    again.push('\n');
    assert_eq!(again, String::from_utf8_lossy(stdout));
}

#[test]
fn json_output_round_trips_for_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args, _) in invocations(dir.path()) {
        let run = mtkit(json_args(&args));
        assert_eq!(run.code, 0, "{name}: {}", run.stderr);
        match name {
            "clean" => assert_round_trip::<CleanReport>(&run.stdout),
            "tokenize" => assert_round_trip::<TokenizeReport>(&run.stdout),
            "truecase" => assert_round_trip::<TruecaseReport>(&run.stdout),
            "split-compounds" => assert_round_trip::<SplitReport>(&run.stdout),
            "symmetrize" => assert_round_trip::<SymmetrizeReport>(&run.stdout),
            "lm-train" => assert_round_trip::<LmTrainReport>(&run.stdout),
            "lm-ppl" => assert_round_trip::<LmPplReport>(&run.stdout),
            "score" => assert_round_trip::<ScoreReport>(&run.stdout),
            "compare" => assert_round_trip::<CompareReport>(&run.stdout),
            "reproduce-paper" => assert_round_trip::<ReproduceReport>(&run.stdout),
            other => panic!("no schema for {other}"),
        }
    }
}

#[test]
fn tsv_output_starts_with_provenance() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args, _) in invocations(dir.path()) {
        let run = mtkit(&args);
        assert_eq!(run.code, 0, "{name}: {}", run.stderr);
        let text = run.text();
        let first = text.lines().next().unwrap();
        assert!(first.starts_with(&format!("# mtkit {} command={name} config_sha256=", env!("CARGO_PKG_VERSION"))));
    }
}

#[test]
fn identical_candidate_and_reference_score_100() {
    let r = fixture("ref1.txt");
    let run = mtkit([OsString::from("score"), "--metric".into(), "bleu".into(), r.clone().into(), r.into()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let row = run.text().lines().find(|l| l.starts_with("bleu\t")).unwrap().to_owned();
    assert_eq!(row, "bleu\t1.0000\t100.00\t-");
}

#[test]
fn score_json_carries_breakdowns_and_bands() {
    let run = mtkit([
        OsString::from("score"),
        "--band".into(),
        "--format".into(),
        "json".into(),
        fixture("cand.txt").into(),
        fixture("ref1.txt").into(),
        fixture("ref2.txt").into(),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let env: Envelope<ScoreReport> = parse(&run.stdout);
    let r = env.report;
    assert_eq!((r.segments, r.references), (3, 2));
    assert_eq!(r.rows.iter().map(|x| x.metric).collect::<Vec<_>>(), Metric::ALL);
    assert!(r.bleu.is_some() && r.nist.is_some() && r.meteor.is_some() && r.ter.is_some());
    assert!(r.rows.iter().all(|x| x.normalized.is_some() && x.band.is_some()));
    assert_eq!(env.provenance.inputs.len(), 3);
}

#[test]
fn clean_names_the_overlong_pair() {
    let dir = tempfile::tempdir().unwrap();
    let run = mtkit([
        OsString::from("clean"),
        "--max-tokens".into(),
        "80".into(),
        "--format".into(),
        "json".into(),
        fixture("clean.src").into(),
        fixture("clean.tgt").into(),
        "--out-source".into(),
        dir.path().join("s").into(),
        "--out-target".into(),
        dir.path().join("t").into(),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = parse::<CleanReport>(&run.stdout).report;
    let too_long: Vec<usize> = r.dropped.iter().filter(|d| d.reason == DropReason::TooLong).map(|d| d.pair_id).collect();
    assert_eq!(too_long, vec![2]);
    assert_eq!(r.kept + r.dropped.len(), r.pairs);
    let kept = std::fs::read_to_string(dir.path().join("s")).unwrap();
    assert_eq!(kept.lines().count(), r.kept);
    assert!(kept.lines().all(|l| l.split_whitespace().count() <= 80));
}

#[test]
fn reproduce_paper_passes() {
    let run = mtkit(["reproduce-paper", "--format", "json"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let r = parse::<ReproduceReport>(&run.stdout).report;
    assert!(r.passed);
    assert!(r.checks.iter().filter(|c| c.name.starts_with("band ")).all(|c| c.label.as_deref() == Some(Band::GoodFluent.name())));
    assert_eq!(r.checks.iter().filter(|c| c.name.starts_with("band ")).count(), 29);
}

#[test]
fn flags_override_config_file() {
    let cfg = fixture("config.json");
    let run = mtkit([OsString::from("--config"), cfg.clone().into(), "score".into(), fixture("cand.txt").into(), fixture("ref1.txt").into()]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    // config asks for json and bands
    let r = parse::<ScoreReport>(&run.stdout).report;
    assert!(r.rows.iter().all(|x| x.band.is_some()));

    let run = mtkit([
        OsString::from("--config"),
        cfg.into(),
        "--format".into(),
        "tsv".into(),
        "score".into(),
        fixture("cand.txt").into(),
        fixture("ref1.txt").into(),
    ]);
    assert!(run.text().starts_with("# mtkit"));
}

#[test]
fn config_hash_tracks_options_not_paths() {
    let dir = tempfile::tempdir().unwrap();
    let hash = |args: &[&str]| {
        let mut v: Vec<OsString> = vec!["lm-train".into(), fixture("lm_train.txt").into()];
        v.extend(args.iter().map(OsString::from));
        let run = mtkit(v);
        assert_eq!(run.code, 0, "{}", run.stderr);
        run.text().lines().next().unwrap().rsplit('=').next().unwrap().to_owned()
    };
    let a = dir.path().join("a").to_string_lossy().into_owned();
    let b = dir.path().join("b").to_string_lossy().into_owned();
    assert_eq!(hash(&["--output", &a]), hash(&["--output", &b]));
    assert_ne!(hash(&["--output", &a]), hash(&["--output", &a, "--order", "2"]));
    assert_eq!(hash(&["--output", &a]), hash(&["--output", &a, "--smoothing", "kn"]));
}

#[test]
fn exit_codes() {
    let missing = mtkit([OsString::from("score"), fixture("cand.txt").into(), fixture("no_such_file.txt").into()]);
    assert_eq!(missing.code, 3);
    let rec: serde_json::Value = serde_json::from_str(missing.stderr.trim()).unwrap();
    assert_eq!(rec["error"]["kind"], "io");

    let bad_metric = mtkit([OsString::from("score"), "--metric".into(), "rouge".into(), fixture("cand.txt").into(), fixture("ref1.txt").into()]);
    assert_eq!(bad_metric.code, 1);
    let rec: serde_json::Value = serde_json::from_str(bad_metric.stderr.trim()).unwrap();
    assert_eq!(rec["error"]["kind"], "validation");

    assert_eq!(mtkit(["no-such-command"]).code, 1);
    assert_eq!(mtkit(["compare", "--test", "ttest", fixture("pl_en.csv").to_str().unwrap()]).code, 1);
    assert_eq!(mtkit(["--version"]).code, 0);
    assert_eq!(mtkit(["--help"]).code, 0);

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(&cfg, r#"{"lm": {"orders": 3}}"#).unwrap();
    assert_eq!(mtkit([OsString::from("--config"), cfg.into(), "reproduce-paper".into()]).code, 1);
}

#[test]
fn mismatched_reference_length_is_rejected() {
    let run = mtkit([OsString::from("score"), fixture("cand.txt").into(), fixture("lm_heldout.txt").into()]);
    assert_eq!(run.code, 1);
}

#[test]
fn lm_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.lm");
    let run = mtkit([
        OsString::from("lm-train"),
        fixture("lm_train.txt").into(),
        "--order".into(),
        "2".into(),
        "--output".into(),
        model.clone().into(),
        "--format".into(),
        "json".into(),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let train = parse::<LmTrainReport>(&run.stdout).report;
    assert_eq!(train.ngrams.len(), 2);

    let single = mtkit([OsString::from("lm-ppl"), "--model".into(), model.clone().into(), "--format".into(), "json".into(), fixture("lm_train.txt").into()]);
    let p = parse::<LmPplReport>(&single.stdout).report;
    assert!(p.perplexity > 1.0 && p.perplexity < train.vocab_size as f64);
    assert_eq!(p.oov_tokens, 0);

    let no_weights = mtkit([OsString::from("lm-ppl"), "--model".into(), model.clone().into(), "--model".into(), model.into(), fixture("lm_test.txt").into()]);
    assert_eq!(no_weights.code, 1);
}

#[test]
fn symmetrize_output_has_one_line_per_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    for h in ["intersection", "union", "grow", "grow-diag", "grow-diag-final", "grow-diag-final-and"] {
        let run = mtkit([
            OsString::from("symmetrize"),
            "--heuristic".into(),
            h.into(),
            "--source".into(),
            fixture("align.src").into(),
            "--target".into(),
            fixture("align.tgt").into(),
            fixture("fwd.align").into(),
            fixture("rev.align").into(),
            "--output".into(),
            out.clone().into(),
        ]);
        assert_eq!(run.code, 0, "{h}: {}", run.stderr);
        assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 3);
    }
    let bad = mtkit([OsString::from("symmetrize"), "--heuristic".into(), "grow-dialog".into(), fixture("fwd.align").into(), fixture("rev.align").into(), "--output".into(), out.into()]);
    assert_eq!(bad.code, 1);
}
