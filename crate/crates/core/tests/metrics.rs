use mtkit::metrics::{
    bleu, interpretability_band, meteor, nist, normalize_score, ter, Band, BleuConfig, EvalPair, Metric,
    MAX_SHIFT_LENGTH, NIST_DEFAULT_ORDER,
};
use mtkit::text::TokenizedSentence;
use mtkit_oracles::metrics as oracle;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sentence(rng: &mut ChaCha8Rng, vocab: &[&str], min: usize, max: usize) -> Vec<String> {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| vocab[rng.gen_range(0..vocab.len())].to_string()).collect()
}

fn to_pair(cand: &[String], refs: &[Vec<String>]) -> EvalPair {
    EvalPair::new(
        TokenizedSentence::new(cand.to_vec()).unwrap(),
        refs.iter().map(|r| TokenizedSentence::new(r.clone()).unwrap()).collect(),
    )
    .unwrap()
}

type Segment = (Vec<String>, Vec<Vec<String>>);

fn random_corpus(rng: &mut ChaCha8Rng) -> Vec<Segment> {
    let vocab = ["a", "b", "c", "d", "e"];
    let segments = rng.gen_range(1..=4);
    (0..segments)
        .map(|_| {
            let refs = rng.gen_range(1..=3);
            (sentence(rng, &vocab, 1, 8), (0..refs).map(|_| sentence(rng, &vocab, 1, 8)).collect())
        })
        .collect()
}

fn borrowed(corpus: &[Segment]) -> Vec<(Vec<&str>, Vec<Vec<&str>>)> {
    corpus
        .iter()
        .map(|(c, rs)| {
            (c.iter().map(String::as_str).collect(), rs.iter().map(|r| r.iter().map(String::as_str).collect()).collect())
        })
        .collect()
}

#[test]
fn bleu_matches_brute_force_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let corpus = random_corpus(&mut rng);
        let pairs: Vec<EvalPair> = corpus.iter().map(|(c, r)| to_pair(c, r)).collect();
        let report = bleu(&pairs, &BleuConfig::default()).unwrap();
        let b = borrowed(&corpus);
        for n in 1..=4 {
            assert_eq!((report.matches[n - 1], report.totals[n - 1]), oracle::bleu_counts(&b, n));
        }
        assert!((report.score - oracle::bleu(&b, 4)).abs() < 1e-9);
    }
}

#[test]
fn nist_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let corpus = random_corpus(&mut rng);
        let pairs: Vec<EvalPair> = corpus.iter().map(|(c, r)| to_pair(c, r)).collect();
        let got = nist(&pairs, NIST_DEFAULT_ORDER).unwrap().score;
        let want = oracle::nist(&borrowed(&corpus), NIST_DEFAULT_ORDER);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
}

#[test]
fn nist_identity_equals_reference_self_score() {
    let refs = ["the patient should take one tablet daily", "do not exceed the stated dose"];
    let pairs: Vec<EvalPair> = refs.iter().map(|r| EvalPair::from_strs(r, &[r]).unwrap()).collect();
    let got = nist(&pairs, 5).unwrap();
    let tokens: Vec<Vec<&str>> = refs.iter().map(|r| r.split(' ').collect()).collect();
    let b: Vec<(Vec<&str>, Vec<Vec<&str>>)> = tokens.iter().map(|t| (t.clone(), vec![t.clone()])).collect();
    assert!((got.score - oracle::nist(&b, 5)).abs() < 1e-12);
    assert_eq!(got.brevity_penalty, 1.0);
}

#[test]
fn ter_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let vocab = ["a", "b", "c", "d"];
    for case in 0..500 {
        let hyp = sentence(&mut rng, &vocab, 1, 8);
        let reference = sentence(&mut rng, &vocab, 1, 8);
        let report = ter(&to_pair(&hyp, std::slice::from_ref(&reference))).unwrap();
        let h: Vec<&str> = hyp.iter().map(String::as_str).collect();
        let r: Vec<&str> = reference.iter().map(String::as_str).collect();
        let want = oracle::ter_edits(&h, &r, MAX_SHIFT_LENGTH);
        assert_eq!(report.edits as usize, want, "case {case}: {h:?} -> {r:?}");
        assert!(report.optimal);
        assert!(report.edits as usize <= mtkit::metrics::edit_distance(&h, &r));
    }
}

#[test]
fn meteor_matches_exhaustive_alignment() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let vocab = ["a", "b", "c"];
    for _ in 0..300 {
        let cand = sentence(&mut rng, &vocab, 0, 7);
        let reference = sentence(&mut rng, &vocab, 1, 7);
        let report = meteor(&to_pair(&cand, std::slice::from_ref(&reference)));
        let c: Vec<&str> = cand.iter().map(String::as_str).collect();
        let r: Vec<&str> = reference.iter().map(String::as_str).collect();
        let (m, ch) = oracle::meteor_alignment(&c, &r);
        assert_eq!((report.matches as usize, report.chunks as usize), (m, ch), "{c:?} / {r:?}");
    }
}

#[test]
fn single_word_substitution_sentence() {
    let line = include_str!("fixtures/ter_substitution.tsv").trim_end();
    let (cand, reference) = line.split_once('\t').unwrap();
    let reference = mtkit::text::tokenize_str(reference);
    let r = ter(&EvalPair::new(mtkit::text::tokenize_str(cand), vec![reference.clone()]).unwrap()).unwrap();
    assert_eq!((r.substitutions, r.insertions, r.deletions, r.shifts, r.edits), (1, 0, 0, 0, 1));
    assert_eq!(r.score, 100.0 / reference.len() as f64);
}

fn tokens() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e", "f"]).prop_map(str::to_owned), 1..9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn identity_gives_best_values(s in tokens()) {
        let p = to_pair(&s, std::slice::from_ref(&s));
        prop_assert_eq!(bleu(std::slice::from_ref(&p), &BleuConfig::default()).unwrap().score, if s.len() >= 4 { 1.0 } else { 0.0 });
        prop_assert_eq!(ter(&p).unwrap().edits, 0);
        let m = meteor(&p);
        prop_assert_eq!((m.matches as usize, m.chunks), (s.len(), 1));
        prop_assert!((m.score - (1.0 - 0.5 / (s.len() as f64).powi(3))).abs() < 1e-12);
    }

    #[test]
    fn unigram_precision_ignores_order(s in tokens(), r in tokens(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut shuffled = s.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let cfg = BleuConfig::default();
        let a = bleu(&[to_pair(&s, std::slice::from_ref(&r))], &cfg).unwrap();
        let b = bleu(&[to_pair(&shuffled, std::slice::from_ref(&r))], &cfg).unwrap();
        prop_assert_eq!(a.precisions[0], b.precisions[0]);
        let ident = bleu(&[to_pair(&r, std::slice::from_ref(&r))], &cfg).unwrap();
        prop_assert!(a.score <= ident.score);
    }

    #[test]
    fn repeating_a_clipped_word_never_raises_matches(s in tokens(), r in tokens(), extra in 1usize..4) {
        let word = s[0].clone();
        let ref_count = r.iter().filter(|t| **t == word).count();
        let have = s.iter().filter(|t| **t == word).count();
        prop_assume!(have >= ref_count);
        let mut more = s.clone();
        more.extend(std::iter::repeat_n(word, extra));
        let cfg = BleuConfig { max_order: 1, ..Default::default() };
        let a = bleu(&[to_pair(&s, std::slice::from_ref(&r))], &cfg).unwrap();
        let b = bleu(&[to_pair(&more, std::slice::from_ref(&r))], &cfg).unwrap();
        prop_assert_eq!(a.matches[0], b.matches[0]);
    }

    #[test]
    fn ter_never_exceeds_plain_edit_distance(s in tokens(), r in tokens()) {
        let rep = ter(&to_pair(&s, std::slice::from_ref(&r))).unwrap();
        prop_assert!(rep.edits as usize <= mtkit::metrics::edit_distance(&s, &r));
        prop_assert_eq!(rep.edits, rep.insertions + rep.deletions + rep.substitutions + rep.shifts);
    }

    #[test]
    fn meteor_swap_symmetry(s in tokens(), r in tokens()) {
        let fwd = meteor(&to_pair(&s, std::slice::from_ref(&r)));
        let back = meteor(&to_pair(&r, std::slice::from_ref(&s)));
        prop_assert!(fwd.chunks <= fwd.matches && fwd.penalty <= 0.5);
        prop_assert_eq!(fwd.precision, back.recall);
        if s.len() == r.len() {
            prop_assert!((fwd.score - back.score).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_is_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        prop_assume!(a < b);
        for m in [Metric::Bleu, Metric::Meteor] {
            prop_assert!(normalize_score(m, a).unwrap().normalized < normalize_score(m, b).unwrap().normalized);
        }
        prop_assert!(normalize_score(Metric::Nist, 15.0 * a).unwrap().normalized < normalize_score(Metric::Nist, 15.0 * b).unwrap().normalized);
        prop_assert!(normalize_score(Metric::Ter, 100.0 * a).unwrap().normalized > normalize_score(Metric::Ter, 100.0 * b).unwrap().normalized);
    }

    #[test]
    fn bands_partition_the_scale(x in 0.0f64..=100.0) {
        let band = interpretability_band(x).unwrap();
        let expected = [(x < 15.0, Band::Unsatisfactory), ((15.0..=30.0).contains(&x), Band::Rough),
            (x > 30.0 && x <= 50.0, Band::Understandable), (x > 50.0, Band::GoodFluent)];
        prop_assert_eq!(expected.iter().filter(|(hit, _)| *hit).count(), 1);
        prop_assert_eq!(expected.iter().find(|(hit, _)| *hit).unwrap().1, band);
    }
}
