//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use fakevid_core::classic::{train_forest, ForestConfig};
use fakevid_core::corpus::{
    agreement_matrix, comment, mine_candidates, split_dataset, AnnotationLabel, AnnotationRound, Dataset, Label,
    MiningConfig, VideoRecord,
};
use fakevid_core::embeddings::EmbeddingTable;
use fakevid_core::eval::{evaluate, f1_score, pca_project};
use fakevid_core::features::{extract_features, prune_correlated};
use fakevid_core::lexicon::{
    builtin_fakeness_phrases, parse_entries, LexiconSet, DEFAULT_CLICKBAIT_PHRASES, DEFAULT_FAKENESS_PATTERNS,
    DEFAULT_SWEAR_WORDS, DEFAULT_VIOLENT_WORDS,
};
use fakevid_core::nn::{gradient_check, seeded_rng, Activation, DenseLayer, Parameterized};
use fakevid_core::synthetic::{generate, SyntheticConfig};
use fakevid_core::title_scorer::{train_title_scorer, TitleScorer, TitleScorerConfig};
use fakevid_core::ucnet::{
    classify, train, FakenessVector, InputLimits, TrainingConfig, UcnetModel, UcnetParams, UcnetShape, VideoInput,
};
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn gradient_correctness() -> Outcome {
    let start = Instant::now();
    let shape = UcnetShape {
        embedding_dim: 8,
        hidden_dim: 8,
        phrase_count: 30,
        feature_count: 2,
    };
    let params = UcnetParams::init(shape, 3);
    let mut rng = seeded_rng(5);
    let raw = (0..3)
        .map(|c| {
            let seq = (0..5).map(|_| (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let bits: Vec<f64> = (0..30).map(|p| if (p + c) % 7 == 0 { 1.0 } else { 0.0 }).collect();
            (seq, FakenessVector::from(bits))
        })
        .collect();
    let input = VideoInput::new(raw, vec![0.8, -0.3]);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for class in [0, 1] {
        let mut grad = params.zeros_like();
        params.accumulate_gradient(&input, class, 1.0, &mut grad).map_err(e)?;
        let check = gradient_check(&params, &grad, 1e-5, |p| p.loss(&input, class)).map_err(e)?;
        worst = worst.max(check.max_relative_error);
        checked += check.parameters_checked;
    }
    let elapsed = start.elapsed();
    ensure(worst < 1e-4, || format!("max relative error {worst:.3e}"))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("max relative error {worst:.2e} over {checked} parameters in {elapsed:.2?}"))
}

fn baseline_arithmetic() -> Outcome {
    let mut truth = vec![Label::Fake; 31];
    truth.extend(vec![Label::Real; 23]);
    let pred = vec![Label::Fake; 54];
    let r = evaluate(&truth, &pred).map_err(e)?;
    let got = [r.macro_precision, r.macro_recall, r.macro_f1];
    let want = [0.287, 0.500, 0.365];
    for (g, w) in got.iter().zip(want) {
        ensure((g - w).abs() <= 1e-3, || format!("macro P/R/F {got:?}, expected {want:?}"))?;
    }
    Ok(format!(
        "macro P/R/F {:.3}/{:.3}/{:.3}",
        r.macro_precision, r.macro_recall, r.macro_f1
    ))
}

fn row_arithmetic() -> Outcome {
    let closed = f1_score(0.64, 0.88);
    ensure(format!("{closed:.2}") == "0.74", || format!("f1_score gave {closed}"))?;
    // 176 real kept, 24 real flagged, 99 fake passed as real, 50 fake caught:
    // real precision 176/275 = 0.64, recall 176/200 = 0.88.
    let mut truth = Vec::new();
    let mut pred = Vec::new();
    for (t, p, n) in [
        (Label::Real, Label::Real, 176),
        (Label::Real, Label::Fake, 24),
        (Label::Fake, Label::Real, 99),
        (Label::Fake, Label::Fake, 50),
    ] {
        truth.extend(std::iter::repeat(t).take(n));
        pred.extend(std::iter::repeat(p).take(n));
    }
    let real = evaluate(&truth, &pred).map_err(e)?.real;
    ensure((real.precision - 0.64).abs() < 1e-12 && (real.recall - 0.88).abs() < 1e-12, || {
        format!("real row P {} R {}", real.precision, real.recall)
    })?;
    ensure(format!("{:.2}", real.f1) == "0.74", || format!("real F1 {}", real.f1))?;
    Ok(format!("F1(0.64, 0.88) = {closed:.4}, report row F1 {:.4}", real.f1))
}

fn labels_of(d: &Dataset) -> Vec<Label> {
    d.records().iter().map(|v| v.label).collect()
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let corpus = generate(&SyntheticConfig::default()).map_err(e)?;
    let lex = LexiconSet::builtin();
    let scorer = train_title_scorer(&corpus.titles, &lex, &TitleScorerConfig::default()).map_err(e)?;
    let (train_set, test_set) = split_dataset(&corpus.dataset, 0.3, 0).map_err(e)?;
    let features = |d: &Dataset| -> Result<Vec<Vec<f64>>, String> {
        d.records()
            .iter()
            .map(|v| extract_features(v, &lex, &scorer).map(|f| f.to_array().to_vec()).map_err(e))
            .collect()
    };
    let (x_train, x_test) = (features(&train_set)?, features(&test_set)?);
    let (y_train, y_test) = (labels_of(&train_set), labels_of(&test_set));

    let forest = train_forest(&x_train, &y_train, ForestConfig::default(), 0).map_err(e)?;
    let rf_pred = x_test.iter().map(|r| forest.predict(r)).collect::<Result<Vec<_>, _>>().map_err(e)?;
    let rf_f = evaluate(&y_test, &rf_pred).map_err(e)?.macro_f1;

    let kept = prune_correlated(&x_train, &forest.feature_importances(), 0.2).map_err(e)?;
    let pick = |x: &[Vec<f64>]| -> Vec<Vec<f64>> { x.iter().map(|r| kept.iter().map(|&i| r[i]).collect()).collect() };
    let outcome = train(
        &train_set,
        &pick(&x_train),
        &corpus.table,
        &builtin_fakeness_phrases(),
        &TrainingConfig::default(),
    )
    .map_err(e)?;
    let mut uc_pred = Vec::new();
    for (v, row) in test_set.records().iter().zip(pick(&x_test)) {
        uc_pred.push(classify(outcome.model.forward(v, &row, &corpus.table).map_err(e)?));
    }
    let uc_f = evaluate(&y_test, &uc_pred).map_err(e)?.macro_f1;
    let elapsed = start.elapsed();
    let summary = format!(
        "UCNet macro-F {uc_f:.3}, forest macro-F {rf_f:.3} on {} held-out videos in {elapsed:.1?}",
        test_set.len()
    );
    ensure(uc_f >= 0.95 && rf_f >= 0.90 && elapsed < Duration::from_secs(300), || summary.clone())?;
    Ok(summary)
}

/// Straightforward restatement of the feature definitions over plain ASCII
/// text, with the `regex` crate for the fakeness patterns.
struct BruteFeatures {
    clickbait: Vec<String>,
    violent: Vec<String>,
    swear: Vec<String>,
    patterns: Vec<regex::Regex>,
}

impl BruteFeatures {
    fn new() -> Self {
        let lower = |s: &str| parse_entries(s).iter().map(|w| w.to_lowercase()).collect();
        BruteFeatures {
            clickbait: lower(DEFAULT_CLICKBAIT_PHRASES),
            violent: lower(DEFAULT_VIOLENT_WORDS),
            swear: lower(DEFAULT_SWEAR_WORDS),
            patterns: parse_entries(DEFAULT_FAKENESS_PATTERNS)
                .iter()
                .map(|p| regex::RegexBuilder::new(p).case_insensitive(true).build().unwrap())
                .collect(),
        }
    }

    fn words(s: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = String::new();
        for ch in s.chars().chain(std::iter::once(' ')) {
            if ch.is_alphanumeric() {
                cur.push(ch);
            } else if !cur.is_empty() {
                if cur.chars().any(|c| c.is_alphabetic()) {
                    out.push(cur.clone());
                }
                cur.clear();
            }
        }
        out
    }

    fn share(hits: usize, total: usize) -> f64 {
        if total == 0 {
            0.0
        } else {
            hits as f64 / total as f64
        }
    }

    fn features(&self, v: &VideoRecord, scorer: &TitleScorer, lex: &LexiconSet) -> [f64; 8] {
        let title_lower = v.title.to_lowercase();
        let words = Self::words(&v.title);
        let violent = words.iter().filter(|w| self.violent.contains(&w.to_lowercase())).count();
        let caps = words
            .iter()
            .filter(|w| w.chars().any(|c| c.is_alphabetic()) && !w.chars().any(|c| c.is_lowercase()))
            .count();
        let ratio = if v.like_count == 0 {
            if v.dislike_count == 0 {
                0.0
            } else {
                1000.0
            }
        } else {
            (v.dislike_count as f64 / v.like_count as f64).min(1000.0)
        };
        let n = v.comments.len();
        let fake = v.comments.iter().filter(|c| self.patterns.iter().any(|p| p.is_match(&c.text))).count();
        let swear = v
            .comments
            .iter()
            .filter(|c| Self::words(&c.text).iter().any(|w| self.swear.contains(&w.to_lowercase())))
            .count();
        let replied = v.comments.iter().filter(|c| c.reply_count > 0).count();
        [
            if self.clickbait.iter().any(|p| title_lower.contains(p.as_str())) { 1.0 } else { 0.0 },
            Self::share(violent, words.len()),
            Self::share(caps, words.len()),
            scorer.score(&v.title, lex).unwrap(),
            ratio,
            Self::share(fake, n),
            Self::share(swear, n),
            Self::share(replied, n),
        ]
    }
}

/// Synthetic videos with lexicon words sprinkled in so every feature moves.
fn varied_videos(n: usize, seed: u64) -> (Vec<VideoRecord>, Vec<(String, Label)>) {
    let corpus = generate(&SyntheticConfig {
        videos: n,
        seed,
        ..SyntheticConfig::default()
    })
    .unwrap();
    let violent = parse_entries(DEFAULT_VIOLENT_WORDS);
    let swear = parse_entries(DEFAULT_SWEAR_WORDS);
    let mut rng = seeded_rng(seed + 100);
    let mut videos = corpus.dataset.into_records();
    for v in videos.iter_mut() {
        if rng.gen_bool(0.4) {
            let w = violent.choose(&mut rng).unwrap();
            let w = if rng.gen_bool(0.5) { w.to_uppercase() } else { w.clone() };
            v.title = format!("{} {w}", v.title);
        }
        for c in v.comments.iter_mut() {
            if rng.gen_bool(0.2) {
                c.text = format!("{} {}", swear.choose(&mut rng).unwrap(), c.text);
            }
        }
        match rng.gen_range(0..10) {
            0 => v.like_count = 0,
            1 => {
                v.like_count = 0;
                v.dislike_count = 0;
            }
            _ => {}
        }
    }
    (videos, corpus.titles)
}

fn brute_mine(videos: &[VideoRecord], config: &MiningConfig) -> (Vec<String>, Vec<String>) {
    let popular: Vec<&VideoRecord> = videos
        .iter()
        .filter(|v| v.view_count >= config.min_views && v.comments.len() >= config.min_comments)
        .collect();
    let has = |v: &VideoRecord, p: &str| v.comments.iter().any(|c| c.text.to_lowercase().contains(p));
    let mut phrases: BTreeSet<String> = config.seed_phrases.iter().map(|p| p.to_lowercase()).collect();
    let mut matched: Vec<&VideoRecord> = Vec::new();
    for _ in 0..config.rounds {
        matched = popular.iter().copied().filter(|v| phrases.iter().any(|p| has(v, p))).collect();
        let mut grown = phrases.clone();
        for p in &config.expansion_lexicon {
            let p = p.to_lowercase();
            if matched.iter().any(|v| has(v, &p)) {
                grown.insert(p);
            }
        }
        phrases = grown;
    }
    let ratio = |v: &VideoRecord| {
        if v.like_count == 0 {
            if v.dislike_count == 0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            v.dislike_count as f64 / v.like_count as f64
        }
    };
    let mut kept: Vec<&VideoRecord> = matched.into_iter().filter(|v| ratio(v) > config.min_dislike_like_ratio).collect();
    kept.sort_by(|a, b| ratio(b).partial_cmp(&ratio(a)).unwrap().then(a.id.cmp(&b.id)));
    (kept.iter().map(|v| v.id.clone()).collect(), phrases.into_iter().collect())
}

fn oracle_equivalence() -> Outcome {
    let lex = LexiconSet::builtin();
    let brute = BruteFeatures::new();
    let (videos, titles) = varied_videos(100, 31);
    let scorer = train_title_scorer(&titles, &lex, &TitleScorerConfig::default()).map_err(e)?;
    for v in &videos {
        ensure(v.title.is_ascii() && v.comments.iter().all(|c| c.text.is_ascii()), || "non-ASCII fixture".into())?;
        let got = extract_features(v, &lex, &scorer).map_err(e)?.to_array();
        let want = brute.features(v, &scorer, &lex);
        ensure(got == want, || format!("{}: {got:?} != {want:?}", v.id))?;
    }

    let mut rng = seeded_rng(77);
    let (mut corpus, _) = varied_videos(50, 32);
    let extras = ["what a hoax", "so fake lol", "TOTALLY STAGED", "photoshopped for sure", "nice one"];
    for v in corpus.iter_mut() {
        v.view_count = rng.gen_range(1_000..60_000);
        v.dislike_count = (v.like_count as f64 * rng.gen_range(0.0..1.0)) as u64;
        v.comments.truncate(rng.gen_range(4..=12));
        if rng.gen_bool(0.3) {
            let k = v.comments.len() + 1;
            v.comments.push(comment(format!("{}-x{k}", v.id), *extras.choose(&mut rng).unwrap(), 0));
        }
    }
    let dataset = Dataset::new("mine-oracle", corpus.clone()).map_err(e)?;
    let mut mined_total = 0;
    for (seeds, rounds, min_ratio) in [(vec!["hoax"], 1, 0.3), (vec!["fake"], 3, 0.2), (vec!["staged", "nice"], 2, 0.5)] {
        let config = MiningConfig {
            min_views: 20_000,
            min_comments: 6,
            min_dislike_like_ratio: min_ratio,
            rounds,
            ..MiningConfig::new(
                seeds.iter().map(|s| s.to_string()).collect(),
                builtin_fakeness_phrases(),
            )
        };
        let result = mine_candidates(&dataset, &config).map_err(e)?;
        let got: Vec<String> = result.candidates.records().iter().map(|v| v.id.clone()).collect();
        let (want, phrases) = brute_mine(&corpus, &config);
        ensure(got == want, || format!("mined {got:?}, brute force {want:?}"))?;
        ensure(result.phrases == phrases, || format!("phrases {:?} vs {phrases:?}", result.phrases))?;
        mined_total += got.len();
    }

    let data = generate(&SyntheticConfig {
        videos: 60,
        seed: 33,
        ..SyntheticConfig::default()
    })
    .map_err(e)?;
    let x: Vec<Vec<f64>> = data
        .dataset
        .records()
        .iter()
        .map(|v| extract_features(v, &lex, &scorer).unwrap().to_array().to_vec())
        .collect();
    let y = labels_of(&data.dataset);
    let config = ForestConfig {
        n_trees: 25,
        max_depth: 3,
        ..ForestConfig::default()
    };
    let forest = train_forest(&x, &y, config, 4).map_err(e)?;
    let mut rng = seeded_rng(9);
    let probes: Vec<Vec<f64>> = x
        .iter()
        .cloned()
        .chain((0..40).map(|_| (0..8).map(|_| rng.gen_range(-0.5..2.0)).collect()))
        .collect();
    for row in &probes {
        let votes = forest.trees().iter().filter(|t| t.predict(row).unwrap() == Label::Fake).count();
        let majority = if 2 * votes >= forest.trees().len() { Label::Fake } else { Label::Real };
        ensure(forest.fake_votes(row).map_err(e)? == votes, || "vote count differs".into())?;
        ensure(forest.predict(row).map_err(e)? == majority, || "majority differs".into())?;
    }
    Ok(format!(
        "100 videos' features identical, {mined_total} mined candidates over 3 configurations agree, {} forest votes agree",
        probes.len()
    ))
}

fn pooling_identities() -> Outcome {
    let mut table = EmbeddingTable::new(6).map_err(e)?;
    let mut rng = seeded_rng(12);
    let words = ["this", "is", "fake", "hoax", "great", "video", "staged", "wow"];
    for w in words {
        table.insert(w, (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect()).map_err(e)?;
    }
    let shape = UcnetShape {
        embedding_dim: 6,
        hidden_dim: 5,
        phrase_count: 30,
        feature_count: 0,
    };
    let mut params = UcnetParams::init(shape, 2);
    params.weight_head = DenseLayer::zeros(30, 1, Activation::Sigmoid);
    let model = UcnetModel::new(params.clone(), builtin_fakeness_phrases(), InputLimits::default()).map_err(e)?;
    let texts = ["this is fake", "great video", "hoax hoax wow", "staged", "is this great", "wow"];
    let comments: Vec<_> = texts.iter().enumerate().map(|(i, t)| comment(i, *t, 0)).collect();

    let unified = model.unified_embedding(&comments, &table).map_err(e)?;
    let mut mean = vec![0.0; 5];
    for t in texts {
        let seq: Vec<&[f64]> = t.split(' ').map(|w| table.get(w).unwrap()).collect();
        let h = params.lstm.forward_sequence(&seq).map_err(e)?;
        for (m, x) in mean.iter_mut().zip(h) {
            *m += x / texts.len() as f64;
        }
    }
    let gap = unified.iter().zip(&mean).map(|(u, m)| (u - 0.5 * m).abs()).fold(0.0, f64::max);
    ensure(gap <= 1e-12, || format!("zero head differs from half mean by {gap:e}"))?;

    let trained = UcnetModel::new(UcnetParams::init(shape, 6), builtin_fakeness_phrases(), InputLimits::default())
        .map_err(e)?;
    let base = trained.unified_embedding(&comments, &table).map_err(e)?;
    for _ in 0..20 {
        let mut shuffled = comments.clone();
        shuffled.shuffle(&mut rng);
        ensure(trained.unified_embedding(&shuffled, &table).map_err(e)? == base, || {
            "permutation changed the embedding".into()
        })?;
    }
    let doubled: Vec<_> = comments.iter().chain(&comments).cloned().collect();
    ensure(trained.unified_embedding(&doubled, &table).map_err(e)? == base, || {
        "duplication changed the embedding".into()
    })?;
    Ok(format!("zero-head gap {gap:.1e}; permutation and duplication exact"))
}

/// Leading eigenpairs of a symmetric matrix by power iteration with
/// deflation.
fn power_iteration(mut a: Vec<Vec<f64>>, k: usize) -> Vec<(f64, Vec<f64>)> {
    let d = a.len();
    let mut out = Vec::new();
    for c in 0..k {
        let mut v: Vec<f64> = (0..d).map(|i| 1.0 + ((i * 31 + c * 7) % 11) as f64 / 10.0).collect();
        let mut lambda = 0.0;
        for _ in 0..200_000 {
            let w: Vec<f64> = (0..d).map(|i| (0..d).map(|j| a[i][j] * v[j]).sum()).collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
            let delta = next.iter().zip(&v).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
            v = next;
            lambda = norm;
            if delta < 1e-15 {
                break;
            }
        }
        for i in 0..d {
            for j in 0..d {
                a[i][j] -= lambda * v[i] * v[j];
            }
        }
        out.push((lambda, v));
    }
    out
}

fn pca_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..10u64 {
        let mut rng = seeded_rng(1000 + seed);
        let scales = [3.0, 2.0, 1.2, 0.6, 0.2];
        let x: Vec<Vec<f64>> = (0..20)
            .map(|_| scales.iter().map(|s| s * rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let k = 3;
        let p = pca_project(&x, k).map_err(e)?;
        ensure(p.explained_variance.windows(2).all(|w| w[0] >= w[1]), || {
            format!("variances increase: {:?}", p.explained_variance)
        })?;
        let full = pca_project(&x, 5).map_err(e)?;
        ensure(full.explained_variance.windows(2).all(|w| w[0] >= w[1]), || "full spectrum not sorted".into())?;

        let n = x.len() as f64;
        let mean: Vec<f64> = (0..5).map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n).collect();
        let centered: Vec<Vec<f64>> = x.iter().map(|r| r.iter().zip(&mean).map(|(v, m)| v - m).collect()).collect();
        let cov: Vec<Vec<f64>> = (0..5)
            .map(|i| (0..5).map(|j| centered.iter().map(|r| r[i] * r[j]).sum::<f64>() / (n - 1.0)).collect())
            .collect();
        let pairs = power_iteration(cov, k);
        for (c, (lambda, v)) in pairs.iter().enumerate() {
            worst = worst.max((lambda - p.explained_variance[c]).abs());
            let oracle: Vec<f64> = centered.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
            let ours: Vec<f64> = p.projected.iter().map(|r| r[c]).collect();
            let same = oracle.iter().zip(&ours).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let flipped = oracle.iter().zip(&ours).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max);
            let gap = same.min(flipped);
            worst = worst.max(gap);
            ensure(gap <= 1e-8, || format!("seed {seed} component {c} differs by {gap:e}"))?;
        }
    }
    Ok(format!("10 random 20x5 matrices, max deviation {worst:.1e}"))
}

fn cli(args: &[&str]) -> Result<(), String> {
    let mut argv = vec!["fakevid"];
    argv.extend_from_slice(args);
    match fakevid::cli::run(argv) {
        0 => Ok(()),
        code => Err(format!("`{}` exited with {code}", args.join(" "))),
    }
}

fn read(p: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(p).map_err(|err| format!("{}: {err}", p.display()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let d = dir.path();
    let s = |name: &str| d.join(name).to_str().unwrap().to_string();
    cli(&["make-synthetic", "--output-dir", &s("corpus"), "--videos", "40", "--seed", "5"])?;
    cli(&[
        "features",
        "--input",
        &s("corpus/dataset.jsonl"),
        "--titles",
        &s("corpus/titles.tsv"),
        "--output",
        &s("features.csv"),
    ])?;
    let mut compared = 0;
    for run in ["a", "b"] {
        for model in ["logistic", "tree", "forest"] {
            cli(&[
                "train-classic",
                "--features",
                &s("features.csv"),
                "--model",
                model,
                "--seed",
                "7",
                "--test-fraction",
                "0.3",
                "--n-trees",
                "20",
                "--epochs",
                "200",
                "--output",
                &s(&format!("{run}/{model}.model")),
                "--predictions",
                &s(&format!("{run}/{model}.pred.csv")),
                "--truth",
                &s(&format!("{run}/{model}.truth.csv")),
            ])?;
            cli(&[
                "evaluate",
                "--pred",
                &s(&format!("{run}/{model}.pred.csv")),
                "--truth",
                &s(&format!("{run}/{model}.truth.csv")),
                "--output",
                &s(&format!("{run}/{model}.report.csv")),
            ])?;
        }
        cli(&[
            "train-ucnet",
            "--input",
            &s("corpus/dataset.jsonl"),
            "--embeddings",
            &s("corpus/embeddings.txt"),
            "--features",
            &s("features.csv"),
            "--seed",
            "7",
            "--epochs",
            "3",
            "--hidden-dim",
            "12",
            "--test-fraction",
            "0.3",
            "--output",
            &s(&format!("{run}/ucnet.model")),
            "--predictions",
            &s(&format!("{run}/ucnet.pred.csv")),
            "--truth",
            &s(&format!("{run}/ucnet.truth.csv")),
        ])?;
        cli(&[
            "evaluate",
            "--pred",
            &s(&format!("{run}/ucnet.pred.csv")),
            "--truth",
            &s(&format!("{run}/ucnet.truth.csv")),
            "--output",
            &s(&format!("{run}/ucnet.report.csv")),
        ])?;
    }
    for model in ["logistic", "tree", "forest", "ucnet"] {
        for suffix in ["model", "pred.csv", "report.csv", "model.manifest.json", "report.csv.manifest.json"] {
            let name = format!("{model}.{suffix}");
            let a = read(&d.join("a").join(&name))?;
            let b = read(&d.join("b").join(&name))?;
            if suffix.ends_with("manifest.json") {
                let strip = |bytes: &[u8]| String::from_utf8_lossy(bytes).replace("/a/", "/x/").replace("/b/", "/x/");
                ensure(strip(&a) == strip(&b), || format!("{name} differs beyond the run directory"))?;
            } else {
                ensure(a == b, || format!("{name} differs between reruns"))?;
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} artifacts byte-identical across reruns"))
}

fn agreement_fixture() -> Outcome {
    let table = [[70u64, 62, 26], [54, 308, 38], [6, 27, 59]];
    let mut r1 = AnnotationRound::new();
    let mut r2 = AnnotationRound::new();
    let mut id = 0;
    for (i, row) in table.iter().enumerate() {
        for (j, &count) in row.iter().enumerate() {
            for _ in 0..count {
                let key = format!("video{id:04}");
                r1.insert(key.clone(), AnnotationLabel::ALL[i]);
                r2.insert(key, AnnotationLabel::ALL[j]);
                id += 1;
            }
        }
    }
    let m = agreement_matrix(&r1, &r2).map_err(e)?;
    let swapped = agreement_matrix(&r2, &r1).map_err(e)?;
    let total: u64 = m.iter().flatten().sum();
    ensure(m == table, || format!("matrix {m:?}"))?;
    ensure(total == 650, || format!("total {total}"))?;
    for i in 0..3 {
        for j in 0..3 {
            ensure(swapped[i][j] == m[j][i], || "swap is not the transpose".into())?;
        }
    }
    Ok(format!("total {total}, diagonal {}", m[0][0] + m[1][1] + m[2][2]))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 gradient correctness", gradient_correctness),
        ("2 all-fake baseline arithmetic", baseline_arithmetic),
        ("3 F1 row arithmetic", row_arithmetic),
        ("4 end-to-end separability", end_to_end),
        ("5 oracle equivalence", oracle_equivalence),
        ("6 pooling identities", pooling_identities),
        ("7 PCA against power iteration", pca_oracle),
        ("8 determinism", determinism),
        ("9 agreement matrix", agreement_fixture),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("PASS {name}: {detail}"),
            Ok(Err(detail)) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL {name}: panicked");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
