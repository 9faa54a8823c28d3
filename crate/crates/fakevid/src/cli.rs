//! The `fakevid` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fakevid_core::classic::{train_forest_with, train_logistic, train_tree, ForestConfig, LogisticConfig, TreeConfig};
use fakevid_core::corpus::{agreement_matrix, mine_candidates, stratified_test_mask, Dataset, Label, MiningConfig};
use fakevid_core::eval::{evaluate, pca_project, EvaluationReport};
use fakevid_core::features::{extract_features, prune_correlated, FEATURE_NAMES};
use fakevid_core::synthetic::{generate, SyntheticConfig};
use fakevid_core::title_scorer::{train_title_scorer, TitleScorerConfig};
use fakevid_core::ucnet::{classify, extract_unified_embeddings, train_with, TrainingConfig};

use crate::dataset::{
    load_annotation_round, load_dataset_named_by_file, load_titles, titles_to_string, write_dataset,
};
use crate::embeddings::{load_embeddings, write_embeddings};
use crate::error::{read_to_string, write_bytes, Error, Result};
use crate::lexicons::{load_lexicons, load_list, resolve_dir, Lexicons};
use crate::manifest::RunManifest;
use crate::model_file::ModelDocument;
use crate::models::{
    check_phrase_digest, classic_document, classic_from_document, title_scorer_document, title_scorer_from_document,
    ucnet_document, ucnet_from_document, ClassicModel, StoredClassic, UCNET_KIND,
};
use crate::parallel::Threaded;
use crate::tables::{
    agreement_csv, load_predictions, load_truth, predictions_csv, projection_csv, report_csv, truth_csv,
    FeatureTable, PredictionRow,
};

#[derive(Debug, Parser)]
#[command(name = "fakevid", version, about = "Detect misleading videos from metadata and comments")]
#[command(args_override_self = true)]
pub struct Cli {
    /// File of `key=value` lines used as defaults for the command's flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Worker threads for per-example work; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Directory with lexicon files (defaults to $FAKEVID_LEXICON_DIR, then
    /// the bundled lists).
    #[arg(long, global = true, value_name = "DIR")]
    pub lexicon_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select likely-fake candidate videos by popularity, seed phrases and
    /// dislike ratio.
    Mine(MineArgs),
    /// Cross-tabulate two annotation rounds.
    Agreement(AgreementArgs),
    /// Compute the eight simple features of every video.
    Features(FeaturesArgs),
    /// Drop correlated features, keeping the more important one of each pair.
    Prune(PruneArgs),
    /// Train a logistic regression, decision tree or random forest.
    TrainClassic(TrainClassicArgs),
    /// Train the comment network.
    TrainUcnet(TrainUcnetArgs),
    /// Apply a trained model to a feature table (and comments for UCNet).
    Predict(PredictArgs),
    /// Score predictions against ground truth.
    Evaluate(EvaluateArgs),
    /// Project unified comment embeddings onto principal components.
    Pca(PcaArgs),
    #[command(hide = true)]
    MakeSynthetic(MakeSyntheticArgs),
}

const SUBCOMMANDS: [&str; 10] = [
    "mine",
    "agreement",
    "features",
    "prune",
    "train-classic",
    "train-ucnet",
    "predict",
    "evaluate",
    "pca",
    "make-synthetic",
];

#[derive(Debug, Args)]
pub struct MineArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Seed phrase list (defaults to the lexicon's seed_phrases.txt).
    #[arg(long)]
    pub seed_phrases: Option<PathBuf>,
    /// Phrases allowed to join the seed set (defaults to the fakeness phrases).
    #[arg(long)]
    pub expansion_lexicon: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub min_views: u64,
    #[arg(long, default_value_t = 120)]
    pub min_comments: usize,
    #[arg(long, default_value_t = 0.3)]
    pub min_dislike_like_ratio: f64,
    #[arg(long, default_value_t = 3)]
    pub rounds: usize,
}

#[derive(Debug, Args)]
pub struct AgreementArgs {
    #[arg(long)]
    pub round1: PathBuf,
    #[arg(long)]
    pub round2: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct FeaturesArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Labeled titles (`label<TAB>title`) to train the title scorer on.
    #[arg(long, conflicts_with = "title_model")]
    pub titles: Option<PathBuf>,
    /// A previously trained title scorer.
    #[arg(long)]
    pub title_model: Option<PathBuf>,
    /// Where to save a title scorer trained from --titles.
    #[arg(long)]
    pub title_model_output: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ForestArgs {
    #[arg(long, default_value_t = 100)]
    pub n_trees: usize,
    #[arg(long, default_value_t = 8)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 3)]
    pub features_per_split: usize,
    #[arg(long, default_value_t = 2)]
    pub min_samples_leaf: usize,
}

impl ForestArgs {
    fn config(&self) -> ForestConfig {
        ForestConfig {
            n_trees: self.n_trees,
            max_depth: self.max_depth,
            features_per_split: self.features_per_split,
            min_samples_leaf: self.min_samples_leaf,
        }
    }
}

#[derive(Debug, Args)]
pub struct PruneArgs {
    #[arg(long)]
    pub features: PathBuf,
    /// Selected feature names, one per line.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = fakevid_core::features::DEFAULT_CORRELATION_THRESHOLD)]
    pub threshold: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub forest: ForestArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelType {
    Logistic,
    Tree,
    Forest,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    /// Hold out this fraction (stratified) for prediction; without it the
    /// model trains on every row.
    #[arg(long)]
    pub test_fraction: Option<f64>,
    /// Predictions (`video_id,label,p_fake`) for the held-out rows, or for
    /// all rows without --test-fraction.
    #[arg(long)]
    pub predictions: Option<PathBuf>,
    /// Ground truth (`video_id,label`) for the predicted rows.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainClassicArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = ModelType::Forest)]
    pub model: ModelType,
    /// Feature names to use (default: every column).
    #[arg(long)]
    pub selected: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub split: SplitArgs,
    #[command(flatten)]
    pub forest: ForestArgs,
    #[arg(long, default_value_t = 0.1)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
}

#[derive(Debug, Args)]
pub struct TrainUcnetArgs {
    /// Dataset with the videos' comments.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    /// Feature table from `features`.
    #[arg(long)]
    pub features: PathBuf,
    /// Feature names to feed the network (default: all eight).
    #[arg(long)]
    pub selected: Option<PathBuf>,
    #[arg(long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub split: SplitArgs,
    #[arg(long, default_value_t = 1e-4)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 30)]
    pub epochs: usize,
    #[arg(long, default_value_t = 16)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = fakevid_core::ucnet::DEFAULT_MAX_COMMENTS)]
    pub max_comments: usize,
    #[arg(long, default_value_t = fakevid_core::embeddings::DEFAULT_MAX_TOKENS)]
    pub max_tokens: usize,
    #[arg(long, default_value_t = fakevid_core::ucnet::DEFAULT_HIDDEN_DIM)]
    pub hidden_dim: usize,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Dataset with comments (UCNet models only).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Word vectors (UCNet models only).
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: PathBuf,
    /// Report CSV; the rounded report is always printed.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PcaArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    /// Trained UCNet model.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub components: usize,
}

#[derive(Debug, Args)]
pub struct MakeSyntheticArgs {
    #[arg(long)]
    pub output_dir: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub videos: usize,
    #[arg(long, default_value_t = 64)]
    pub embedding_dim: usize,
}

/// Turns `key=value` lines into `--key=value` arguments. Blank lines and
/// `#` comments are skipped.
pub fn config_arguments(text: &str, path: &Path) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::parse(path, i + 1, "expected `key=value`"))?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        out.push(format!("--{key}={}", value.trim()).into());
    }
    Ok(out)
}

/// Inserts config-file arguments right after the subcommand so that flags
/// given on the command line, which come later, override them.
fn merge_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut config = None;
    for (i, a) in argv.iter().enumerate() {
        let s = a.to_string_lossy();
        if let Some(v) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(v));
        } else if s == "--config" {
            config = argv.get(i + 1).map(PathBuf::from);
        }
    }
    let Some(path) = config else {
        return Ok(argv);
    };
    let extra = config_arguments(&read_to_string(&path)?, &path)?;
    let Some(pos) = argv
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
    else {
        return Ok(argv);
    };
    let mut merged = argv[..=pos].to_vec();
    merged.extend(extra);
    merged.extend_from_slice(&argv[pos + 1..]);
    Ok(merged)
}

/// Parses and executes; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let merged = match merge_config(argv) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(&merged) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let arguments = merged.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, arguments) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

struct Ctx {
    threads: Threaded,
    lexicon_dir: Option<PathBuf>,
    arguments: Vec<String>,
}

impl Ctx {
    fn manifest(&self, command: &str) -> RunManifest {
        RunManifest::new(command, self.arguments.clone())
    }

    fn lexicons(&self, manifest: &mut RunManifest) -> Result<Lexicons> {
        let lex = load_lexicons(resolve_dir(self.lexicon_dir.as_deref()).as_deref())?;
        manifest.lexicon_digests = lex.digests.clone();
        Ok(lex)
    }
}

pub fn execute(cli: &Cli, arguments: Vec<String>) -> Result<()> {
    let ctx = Ctx {
        threads: Threaded::new(cli.threads),
        lexicon_dir: cli.lexicon_dir.clone(),
        arguments,
    };
    match &cli.command {
        Command::Mine(a) => mine(&ctx, a),
        Command::Agreement(a) => agreement(&ctx, a),
        Command::Features(a) => features(&ctx, a),
        Command::Prune(a) => prune(&ctx, a),
        Command::TrainClassic(a) => train_classic(&ctx, a),
        Command::TrainUcnet(a) => train_ucnet(&ctx, a),
        Command::Predict(a) => predict(&ctx, a),
        Command::Evaluate(a) => evaluate_cmd(&ctx, a),
        Command::Pca(a) => pca(&ctx, a),
        Command::MakeSynthetic(a) => make_synthetic(&ctx, a),
    }
}

fn mine(ctx: &Ctx, a: &MineArgs) -> Result<()> {
    let mut m = ctx.manifest("mine");
    let lex = ctx.lexicons(&mut m)?;
    let data = load_dataset_named_by_file(&a.input)?;
    m.input(&a.input)?;
    let list = |p: &Option<PathBuf>, m: &mut RunManifest, default: &[String]| -> Result<Vec<String>> {
        match p {
            Some(path) => {
                m.input(path)?;
                load_list(path)
            }
            None => Ok(default.to_vec()),
        }
    };
    let seeds = list(&a.seed_phrases, &mut m, &lex.seed_phrases)?;
    let expansion = list(&a.expansion_lexicon, &mut m, &lex.fakeness_phrases)?;
    let config = MiningConfig {
        min_views: a.min_views,
        min_comments: a.min_comments,
        min_dislike_like_ratio: a.min_dislike_like_ratio,
        rounds: a.rounds,
        ..MiningConfig::new(seeds, expansion)
    };
    let result = mine_candidates(&data, &config)?;
    let candidates = result.candidates;
    write_dataset(&a.output, &candidates)?;
    m.output(&a.output)?;
    let phrases_path = a.output.with_extension("phrases.txt");
    let mut phrases = result.phrases.join("\n");
    phrases.push('\n');
    write_bytes(&phrases_path, phrases.as_bytes())?;
    m.output(&phrases_path)?;
    m.write(&a.output)?;
    println!(
        "mined {} of {} videos ({} fake, {} real); {} phrases after expansion",
        candidates.len(),
        data.len(),
        candidates.count(Label::Fake),
        candidates.count(Label::Real),
        result.phrases.len()
    );
    Ok(())
}

fn agreement(ctx: &Ctx, a: &AgreementArgs) -> Result<()> {
    let mut m = ctx.manifest("agreement");
    let r1 = load_annotation_round(&a.round1)?;
    let r2 = load_annotation_round(&a.round2)?;
    m.input(&a.round1)?;
    m.input(&a.round2)?;
    let matrix = agreement_matrix(&r1, &r2)?;
    write_bytes(&a.output, &agreement_csv(&matrix))?;
    m.output(&a.output)?;
    m.write(&a.output)?;
    let total: u64 = matrix.iter().flatten().sum();
    let agree: u64 = (0..3).map(|i| matrix[i][i]).sum();
    println!("{total} co-annotated videos, {agree} with identical labels");
    Ok(())
}

fn features(ctx: &Ctx, a: &FeaturesArgs) -> Result<()> {
    let mut m = ctx.manifest("features");
    let lex = ctx.lexicons(&mut m)?;
    let data = load_dataset_named_by_file(&a.input)?;
    m.input(&a.input)?;
    let scorer = match (&a.titles, &a.title_model) {
        (Some(titles), _) => {
            m.input(titles)?;
            let config = TitleScorerConfig {
                seed: a.seed,
                ..TitleScorerConfig::default()
            };
            m.seed("title_scorer", a.seed);
            let s = train_title_scorer(&load_titles(titles)?, &lex.set, &config)?;
            if let Some(out) = &a.title_model_output {
                title_scorer_document(&s).save(out)?;
                m.output(out)?;
            }
            s
        }
        (None, Some(path)) => {
            m.input(path)?;
            title_scorer_from_document(&ModelDocument::load(path)?, path)?
        }
        (None, None) => return Err(Error::Usage("features needs --titles or --title-model".into())),
    };
    let mut table = FeatureTable {
        names: FEATURE_NAMES.iter().map(|s| s.to_string()).collect(),
        ids: Vec::new(),
        rows: Vec::new(),
        labels: Vec::new(),
    };
    for v in data.records() {
        table.ids.push(v.id.clone());
        table.rows.push(extract_features(v, &lex.set, &scorer)?.to_array().to_vec());
        table.labels.push(v.label);
    }
    table.save(&a.output)?;
    m.output(&a.output)?;
    m.write(&a.output)?;
    println!("wrote features for {} videos", data.len());
    Ok(())
}

/// Keeps fake/real rows, warning about the rest.
fn labeled_rows(t: FeatureTable) -> FeatureTable {
    let keep: Vec<bool> = t.labels.iter().map(|l| matches!(l, Label::Fake | Label::Real)).collect();
    let dropped = keep.iter().filter(|k| !**k).count();
    if dropped > 0 {
        log::warn!("skipping {dropped} rows without a fake/real label");
    }
    t.subset(&keep)
}

fn prune(ctx: &Ctx, a: &PruneArgs) -> Result<()> {
    let mut m = ctx.manifest("prune");
    let table = labeled_rows(FeatureTable::load(&a.features)?);
    m.input(&a.features)?;
    m.seed("forest", a.seed);
    let forest = train_forest_with(&ctx.threads, &table.rows, &table.labels, a.forest.config(), a.seed)?;
    let importances = forest.feature_importances();
    let kept = prune_correlated(&table.rows, &importances, a.threshold)?;
    let mut text = String::new();
    for &k in &kept {
        text.push_str(&table.names[k]);
        text.push('\n');
    }
    write_bytes(&a.output, text.as_bytes())?;
    m.output(&a.output)?;
    m.write(&a.output)?;
    for (name, imp) in table.names.iter().zip(&importances) {
        println!("{name:<28} importance {imp:.4}");
    }
    let names: Vec<&str> = kept.iter().map(|&k| table.names[k].as_str()).collect();
    println!("kept {}", names.join(", "));
    Ok(())
}

fn selected_names(path: Option<&Path>, all: &[String], m: &mut RunManifest) -> Result<Vec<String>> {
    match path {
        Some(p) => {
            m.input(p)?;
            let names = load_list(p)?;
            if names.is_empty() {
                return Err(Error::Data(format!("{}: no features selected", p.display())));
            }
            Ok(names)
        }
        None => Ok(all.to_vec()),
    }
}

/// `in_test` mask for `--test-fraction`, all false without it.
fn test_mask(split: &SplitArgs, labels: &[Label], seed: u64) -> Result<Vec<bool>> {
    match split.test_fraction {
        Some(f) => Ok(stratified_test_mask(labels, f, seed)?),
        None => Ok(vec![false; labels.len()]),
    }
}

fn write_predictions(split: &SplitArgs, rows: &[PredictionRow], truth: &[(String, Label)], m: &mut RunManifest) -> Result<()> {
    if let Some(p) = &split.predictions {
        write_bytes(p, &predictions_csv(rows))?;
        m.output(p)?;
    }
    if let Some(t) = &split.truth {
        write_bytes(t, &truth_csv(truth))?;
        m.output(t)?;
    }
    Ok(())
}

fn train_classic(ctx: &Ctx, a: &TrainClassicArgs) -> Result<()> {
    let mut m = ctx.manifest("train-classic");
    let table = labeled_rows(FeatureTable::load(&a.features)?);
    m.input(&a.features)?;
    let names = selected_names(a.selected.as_deref(), &table.names, &mut m)?;
    let columns = table.column_indices(&names)?;
    m.seed("split", a.seed);
    m.seed("model", a.seed);
    let in_test = test_mask(&a.split, &table.labels, a.seed)?;
    let in_train: Vec<bool> = in_test.iter().map(|t| !t).collect();
    let train = table.subset(&in_train);
    let x = train.select(&columns);
    let model = match a.model {
        ModelType::Logistic => ClassicModel::Logistic(train_logistic(
            &x,
            &train.labels,
            LogisticConfig {
                learning_rate: a.learning_rate,
                epochs: a.epochs,
            },
        )?),
        ModelType::Tree => ClassicModel::Tree(train_tree(
            &x,
            &train.labels,
            TreeConfig {
                max_depth: a.forest.max_depth,
                min_samples_leaf: a.forest.min_samples_leaf,
                features_per_split: None,
            },
            a.seed,
        )?),
        ModelType::Forest => {
            ClassicModel::Forest(train_forest_with(&ctx.threads, &x, &train.labels, a.forest.config(), a.seed)?)
        }
    };
    let stored = StoredClassic { model, features: names };
    classic_document(&stored).save(&a.output)?;
    m.output(&a.output)?;

    let scored = if a.split.test_fraction.is_some() { table.subset(&in_test) } else { table };
    let mut rows = Vec::with_capacity(scored.ids.len());
    for (id, row) in scored.ids.iter().zip(scored.select(&columns)) {
        rows.push(PredictionRow {
            video_id: id.clone(),
            label: stored.model.predict(&row)?,
            p_fake: stored.model.predict_proba(&row)?,
        });
    }
    let truth: Vec<(String, Label)> = scored.ids.iter().cloned().zip(scored.labels.iter().copied()).collect();
    write_predictions(&a.split, &rows, &truth, &mut m)?;
    m.write(&a.output)?;
    println!("trained {:?} on {} rows", a.model, train.ids.len());
    if a.split.test_fraction.is_some() {
        print_report(&summary(&truth, &rows)?);
    }
    Ok(())
}

fn summary(truth: &[(String, Label)], rows: &[PredictionRow]) -> Result<EvaluationReport> {
    let t: Vec<Label> = truth.iter().map(|(_, l)| *l).collect();
    let p: Vec<Label> = rows.iter().map(|r| r.label).collect();
    Ok(evaluate(&t, &p)?)
}

/// Fake/real records of a dataset, with their feature rows.
fn joined(data: &Dataset, table: &FeatureTable, columns: &[usize]) -> Result<(Dataset, Vec<Vec<f64>>)> {
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for v in data.records() {
        if !matches!(v.label, Label::Fake | Label::Real) {
            continue;
        }
        let row = table
            .row_of(&v.id)
            .ok_or_else(|| Error::Data(format!("video `{}` has no row in the feature table", v.id)))?;
        records.push(v.clone());
        rows.push(columns.iter().map(|&c| row[c]).collect());
    }
    let skipped = data.len() - records.len();
    if skipped > 0 {
        log::warn!("skipping {skipped} videos without a fake/real label");
    }
    Ok((Dataset::new(data.name(), records)?, rows))
}

fn train_ucnet(ctx: &Ctx, a: &TrainUcnetArgs) -> Result<()> {
    let mut m = ctx.manifest("train-ucnet");
    let lex = ctx.lexicons(&mut m)?;
    let data = load_dataset_named_by_file(&a.input)?;
    m.input(&a.input)?;
    let table = FeatureTable::load(&a.features)?;
    m.input(&a.features)?;
    let embeddings = load_embeddings(&a.embeddings, None)?;
    m.input(&a.embeddings)?;
    let names = selected_names(a.selected.as_deref(), &table.names, &mut m)?;
    let columns = table.column_indices(&names)?;
    let (data, rows) = joined(&data, &table, &columns)?;

    let labels: Vec<Label> = data.records().iter().map(|r| r.label).collect();
    m.seed("split", a.seed);
    m.seed("model", a.seed);
    let in_test = test_mask(&a.split, &labels, a.seed)?;
    let pick = |want: bool| -> Result<(Dataset, Vec<Vec<f64>>)> {
        let recs = data
            .records()
            .iter()
            .zip(&in_test)
            .filter(|(_, t)| **t == want)
            .map(|(r, _)| r.clone())
            .collect();
        let rs = rows.iter().zip(&in_test).filter(|(_, t)| **t == want).map(|(r, _)| r.clone()).collect();
        Ok((Dataset::new(data.name(), recs)?, rs))
    };
    let (train_set, train_rows) = pick(false)?;
    let config = TrainingConfig {
        learning_rate: a.learning_rate,
        epochs: a.epochs,
        batch_size: a.batch_size,
        seed: a.seed,
        max_comments_per_video: a.max_comments,
        max_tokens_per_comment: a.max_tokens,
        hidden_dim: a.hidden_dim,
    };
    let outcome = train_with(&train_set, &train_rows, &embeddings, &lex.fakeness_phrases, &config, &ctx.threads)?;
    ucnet_document(&outcome.model, &names, &config).save(&a.output)?;
    m.output(&a.output)?;

    let (scored, scored_rows) = if a.split.test_fraction.is_some() { pick(true)? } else { (data.clone(), rows.clone()) };
    let mut preds = Vec::with_capacity(scored.len());
    for (v, row) in scored.records().iter().zip(&scored_rows) {
        let p = outcome.model.forward(v, row, &embeddings)?;
        preds.push(PredictionRow {
            video_id: v.id.clone(),
            label: classify(p),
            p_fake: p.p_fake,
        });
    }
    let truth: Vec<(String, Label)> = scored.records().iter().map(|v| (v.id.clone(), v.label)).collect();
    write_predictions(&a.split, &preds, &truth, &mut m)?;
    m.write(&a.output)?;
    let losses: Vec<String> = outcome.epoch_losses.iter().map(|l| format!("{l:.4}")).collect();
    println!("trained UCNet on {} videos; epoch losses {}", train_set.len(), losses.join(" "));
    if a.split.test_fraction.is_some() {
        print_report(&summary(&truth, &preds)?);
    }
    Ok(())
}

fn predict(ctx: &Ctx, a: &PredictArgs) -> Result<()> {
    let mut m = ctx.manifest("predict");
    let doc = ModelDocument::load(&a.model)?;
    m.input(&a.model)?;
    let table = FeatureTable::load(&a.features)?;
    m.input(&a.features)?;
    let mut rows = Vec::new();
    if doc.kind == UCNET_KIND {
        let lex = ctx.lexicons(&mut m)?;
        let stored = ucnet_from_document(&doc, &a.model)?;
        check_phrase_digest(&stored, &lex.fakeness_phrases, &a.model)?;
        let (Some(input), Some(emb)) = (&a.input, &a.embeddings) else {
            return Err(Error::Usage("UCNet prediction needs --input and --embeddings".into()));
        };
        let data = load_dataset_named_by_file(input)?;
        let embeddings = load_embeddings(emb, Some(stored.model.params.lstm.input_dim))?;
        m.input(input)?;
        m.input(emb)?;
        let columns = table.column_indices(&stored.features)?;
        for v in data.records() {
            let row = table
                .row_of(&v.id)
                .ok_or_else(|| Error::Data(format!("video `{}` has no row in the feature table", v.id)))?;
            let f: Vec<f64> = columns.iter().map(|&c| row[c]).collect();
            let p = stored.model.forward(v, &f, &embeddings)?;
            rows.push(PredictionRow {
                video_id: v.id.clone(),
                label: classify(p),
                p_fake: p.p_fake,
            });
        }
    } else {
        let stored = classic_from_document(&doc, &a.model)?;
        let columns = table.column_indices(&stored.features)?;
        for (id, row) in table.ids.iter().zip(table.select(&columns)) {
            rows.push(PredictionRow {
                video_id: id.clone(),
                label: stored.model.predict(&row)?,
                p_fake: stored.model.predict_proba(&row)?,
            });
        }
    }
    write_bytes(&a.output, &predictions_csv(&rows))?;
    m.output(&a.output)?;
    m.write(&a.output)?;
    println!("wrote {} predictions", rows.len());
    Ok(())
}

fn print_report(r: &EvaluationReport) {
    println!("{:<8}{:>10}{:>10}{:>10}{:>10}", "class", "precision", "recall", "f1", "support");
    for (name, c) in [("fake", r.fake), ("real", r.real)] {
        println!("{name:<8}{:>10.2}{:>10.2}{:>10.2}{:>10}", c.precision, c.recall, c.f1, c.support);
    }
    println!(
        "{:<8}{:>10.2}{:>10.2}{:>10.2}{:>10}",
        "macro",
        r.macro_precision,
        r.macro_recall,
        r.macro_f1,
        r.confusion.total()
    );
}

fn evaluate_cmd(ctx: &Ctx, a: &EvaluateArgs) -> Result<()> {
    let preds = load_predictions(&a.pred)?;
    let truth = load_truth(&a.truth)?;
    let by_id: std::collections::HashMap<&str, Label> = truth.iter().map(|(id, l)| (id.as_str(), *l)).collect();
    if by_id.len() != truth.len() {
        return Err(Error::Data(format!("{}: duplicate video ids", a.truth.display())));
    }
    let mut t = Vec::with_capacity(preds.len());
    for p in &preds {
        let label = by_id
            .get(p.video_id.as_str())
            .ok_or_else(|| Error::Data(format!("no ground truth for video `{}`", p.video_id)))?;
        t.push(*label);
    }
    if preds.len() != truth.len() {
        return Err(Error::Data(format!(
            "{} predictions but {} ground-truth rows",
            preds.len(),
            truth.len()
        )));
    }
    let p: Vec<Label> = preds.iter().map(|r| r.label).collect();
    let report = evaluate(&t, &p)?;
    print_report(&report);
    if let Some(out) = &a.output {
        let mut m = ctx.manifest("evaluate");
        m.input(&a.pred)?;
        m.input(&a.truth)?;
        write_bytes(out, &report_csv(&report))?;
        m.output(out)?;
        m.write(out)?;
    }
    Ok(())
}

fn pca(ctx: &Ctx, a: &PcaArgs) -> Result<()> {
    let mut m = ctx.manifest("pca");
    let lex = ctx.lexicons(&mut m)?;
    let stored = ucnet_from_document(&ModelDocument::load(&a.model)?, &a.model)?;
    check_phrase_digest(&stored, &lex.fakeness_phrases, &a.model)?;
    m.input(&a.model)?;
    let data = load_dataset_named_by_file(&a.input)?;
    m.input(&a.input)?;
    let embeddings = load_embeddings(&a.embeddings, Some(stored.model.params.lstm.input_dim))?;
    m.input(&a.embeddings)?;
    let unified = extract_unified_embeddings(&data, &embeddings, &stored.model)?;
    let projection = pca_project(&unified, a.components)?;
    let ids: Vec<String> = data.records().iter().map(|v| v.id.clone()).collect();
    let labels: Vec<Label> = data.records().iter().map(|v| v.label).collect();
    write_bytes(&a.output, &projection_csv(&ids, &projection.projected, &labels, a.components))?;
    m.output(&a.output)?;
    m.write(&a.output)?;
    let ev: Vec<String> = projection.explained_variance.iter().map(|v| format!("{v:.4}")).collect();
    println!("projected {} videos; explained variance {}", data.len(), ev.join(" "));
    Ok(())
}

fn make_synthetic(ctx: &Ctx, a: &MakeSyntheticArgs) -> Result<()> {
    let config = SyntheticConfig {
        videos: a.videos,
        embedding_dim: a.embedding_dim,
        seed: a.seed,
        ..SyntheticConfig::default()
    };
    let corpus = generate(&config)?;
    let dataset = a.output_dir.join("dataset.jsonl");
    let vectors = a.output_dir.join("embeddings.txt");
    let titles = a.output_dir.join("titles.tsv");
    write_dataset(&dataset, &corpus.dataset)?;
    write_embeddings(&vectors, &corpus.table)?;
    write_bytes(&titles, titles_to_string(&corpus.titles).as_bytes())?;
    let mut m = ctx.manifest("make-synthetic");
    m.seed("corpus", a.seed);
    for p in [&dataset, &vectors, &titles] {
        m.output(p)?;
    }
    m.write(&dataset)?;
    println!(
        "wrote {} videos, {} word vectors and {} titles to {}",
        corpus.dataset.len(),
        corpus.table.len(),
        corpus.titles.len(),
        a.output_dir.display()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_lines_become_flags() {
        let args = config_arguments("# c\nseed = 7\nlearning_rate=0.5\n\n", Path::new("c")).unwrap();
        assert_eq!(args, [OsString::from("--seed=7"), OsString::from("--learning-rate=0.5")]);
        assert!(config_arguments("novalue\n", Path::new("c")).is_err());
    }

    #[test]
    fn command_line_overrides_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.cfg");
        std::fs::write(&cfg, "seed=3\nepochs=5\n").unwrap();
        let argv: Vec<OsString> = ["fakevid", "--config", cfg.to_str().unwrap(), "train-classic", "--features", "f", "--output", "o", "--seed", "9"]
            .iter()
            .map(OsString::from)
            .collect();
        let cli = Cli::try_parse_from(merge_config(argv).unwrap()).unwrap();
        let Command::TrainClassic(a) = cli.command else { panic!() };
        assert_eq!((a.seed, a.epochs), (9, 5));
    }

    #[test]
    fn unknown_subcommand_is_a_usage_error() {
        assert_eq!(run(["fakevid", "frobnicate"]), 1);
        assert_eq!(run(["fakevid"]), 1);
        assert_eq!(run(["fakevid", "--help"]), 0);
    }
}
