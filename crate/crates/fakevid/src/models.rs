//! Conversions between trained models and [`ModelDocument`]s.

use std::path::Path;

use fakevid_core::classic::{DecisionTree, LogisticModel, Node, RandomForest};
use fakevid_core::corpus::Label;
use fakevid_core::nn::{Activation, DenseLayer};
use fakevid_core::title_scorer::{TitleNet, TitleScorer, TITLE_FEATURE_COUNT};
use fakevid_core::ucnet::{InputLimits, TrainingConfig, UcnetModel, UcnetParams, UcnetShape};

use crate::error::{Error, Result};
use crate::lexicons::phrase_list_digest;
use crate::model_file::ModelDocument;

pub const UCNET_KIND: &str = "ucnet";
pub const TITLE_SCORER_KIND: &str = "title-scorer";
pub const TREE_KIND: &str = "decision-tree";
pub const FOREST_KIND: &str = "random-forest";
pub const LOGISTIC_KIND: &str = "logistic-regression";

const NODE_COLUMNS: usize = 7;

/// A UCNet model with the names of the simple features it consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredUcnet {
    pub model: UcnetModel,
    pub features: Vec<String>,
    pub phrase_digest: String,
}

pub fn ucnet_document(model: &UcnetModel, features: &[String], config: &TrainingConfig) -> ModelDocument {
    let shape = model.params.shape();
    let mut d = ModelDocument::new(UCNET_KIND);
    d.push_meta("embedding_dim", shape.embedding_dim);
    d.push_meta("hidden_dim", shape.hidden_dim);
    d.push_meta("phrase_count", shape.phrase_count);
    d.push_meta("feature_count", shape.feature_count);
    d.push_meta("phrase_digest", phrase_list_digest(&model.phrases));
    for p in &model.phrases {
        d.push_meta("phrase", p);
    }
    for f in features {
        d.push_meta("feature", f);
    }
    d.push_meta("max_comments_per_video", model.limits.max_comments_per_video);
    d.push_meta("max_tokens_per_comment", model.limits.max_tokens_per_comment);
    d.push_meta("config.learning_rate", format!("{:e}", config.learning_rate));
    d.push_meta("config.epochs", config.epochs);
    d.push_meta("config.batch_size", config.batch_size);
    d.push_meta("config.seed", config.seed);
    d.push_params("", &model.params);
    d.push_tensor("feature_mean", vec![shape.feature_count], model.feature_mean().to_vec());
    d.push_tensor("feature_scale", vec![shape.feature_count], model.feature_scale().to_vec());
    d
}

pub fn ucnet_from_document(d: &ModelDocument, path: &Path) -> Result<StoredUcnet> {
    d.expect_kind(UCNET_KIND, path)?;
    let shape = UcnetShape {
        embedding_dim: d.meta_parse("embedding_dim", path)?,
        hidden_dim: d.meta_parse("hidden_dim", path)?,
        phrase_count: d.meta_parse("phrase_count", path)?,
        feature_count: d.meta_parse("feature_count", path)?,
    };
    let phrases: Vec<String> = d.meta_all("phrase").into_iter().map(String::from).collect();
    let features: Vec<String> = d.meta_all("feature").into_iter().map(String::from).collect();
    let digest: String = d.meta_parse("phrase_digest", path)?;
    if phrase_list_digest(&phrases) != digest {
        return Err(Error::format(path, "stored phrases do not match the stored phrase digest"));
    }
    if features.len() != shape.feature_count {
        return Err(Error::format(path, "feature names do not match feature_count"));
    }
    let limits = InputLimits {
        max_comments_per_video: d.meta_parse("max_comments_per_video", path)?,
        max_tokens_per_comment: d.meta_parse("max_tokens_per_comment", path)?,
    };
    let mut params = UcnetParams::zeros(shape);
    d.fill_params("", &mut params, path)?;
    let mean = d.tensor_data("feature_mean", &[shape.feature_count], path)?.to_vec();
    let scale = d.tensor_data("feature_scale", &[shape.feature_count], path)?.to_vec();
    let model = UcnetModel::new(params, phrases, limits)?.with_feature_scaling(mean, scale)?;
    Ok(StoredUcnet {
        model,
        features,
        phrase_digest: digest,
    })
}

/// Refuses a model whose phrase list differs from the one in use.
pub fn check_phrase_digest(stored: &StoredUcnet, phrases: &[String], path: &Path) -> Result<()> {
    let current = phrase_list_digest(phrases);
    if current != stored.phrase_digest {
        return Err(Error::Data(format!(
            "{}: model was trained with fakeness phrases {}, but the configured phrases digest to {current}",
            path.display(),
            stored.phrase_digest
        )));
    }
    Ok(())
}

pub fn title_scorer_document(s: &TitleScorer) -> ModelDocument {
    let mut d = ModelDocument::new(TITLE_SCORER_KIND);
    d.push_meta("hidden_dim", s.net.hidden.output_dim());
    d.push_params("", &s.net);
    d.push_tensor("mean", vec![TITLE_FEATURE_COUNT], s.mean.to_vec());
    d.push_tensor("scale", vec![TITLE_FEATURE_COUNT], s.scale.to_vec());
    d
}

pub fn title_scorer_from_document(d: &ModelDocument, path: &Path) -> Result<TitleScorer> {
    d.expect_kind(TITLE_SCORER_KIND, path)?;
    let hidden: usize = d.meta_parse("hidden_dim", path)?;
    let mut net = TitleNet {
        hidden: DenseLayer::zeros(TITLE_FEATURE_COUNT, hidden, Activation::Relu),
        output: DenseLayer::zeros(hidden, 2, Activation::Softmax),
    };
    d.fill_params("", &mut net, path)?;
    let array = |name: &str| -> Result<[f64; TITLE_FEATURE_COUNT]> {
        let v = d.tensor_data(name, &[TITLE_FEATURE_COUNT], path)?;
        Ok(v.try_into().expect("shape checked"))
    };
    Ok(TitleScorer::from_parts(net, array("mean")?, array("scale")?)?)
}

/// Any of the baseline classifiers.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassicModel {
    Tree(DecisionTree),
    Forest(RandomForest),
    Logistic(LogisticModel),
}

impl ClassicModel {
    pub fn predict_proba(&self, row: &[f64]) -> fakevid_core::Result<f64> {
        match self {
            ClassicModel::Tree(t) => t.predict_proba(row),
            ClassicModel::Forest(f) => f.predict_proba(row),
            ClassicModel::Logistic(m) => m.predict_proba(row),
        }
    }

    pub fn predict(&self, row: &[f64]) -> fakevid_core::Result<Label> {
        match self {
            ClassicModel::Tree(t) => t.predict(row),
            ClassicModel::Forest(f) => f.predict(row),
            ClassicModel::Logistic(m) => m.predict(row),
        }
    }
}

/// A baseline classifier with the names of its input features.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredClassic {
    pub model: ClassicModel,
    pub features: Vec<String>,
}

fn nodes_tensor(t: &DecisionTree) -> Vec<f64> {
    let mut out = Vec::with_capacity(t.nodes().len() * NODE_COLUMNS);
    for node in t.nodes() {
        let row = match *node {
            Node::Leaf { p_fake, samples } => [0.0, 0.0, 0.0, 0.0, 0.0, p_fake, samples as f64],
            Node::Split {
                feature,
                threshold,
                left,
                right,
                samples,
                impurity_decrease,
            } => [1.0, feature as f64, threshold, left as f64, right as f64, impurity_decrease, samples as f64],
        };
        out.extend_from_slice(&row);
    }
    out
}

fn tree_from_tensor(data: &[f64], n_features: usize, path: &Path) -> Result<DecisionTree> {
    let index = |x: f64| -> Result<usize> {
        if x >= 0.0 && x.fract() == 0.0 && x < 9.0e15 {
            Ok(x as usize)
        } else {
            Err(Error::format(path, format!("bad node index `{x}`")))
        }
    };
    let nodes = data
        .chunks(NODE_COLUMNS)
        .map(|r| {
            Ok(if r[0] == 0.0 {
                Node::Leaf {
                    p_fake: r[5],
                    samples: index(r[6])?,
                }
            } else {
                Node::Split {
                    feature: index(r[1])?,
                    threshold: r[2],
                    left: index(r[3])?,
                    right: index(r[4])?,
                    impurity_decrease: r[5],
                    samples: index(r[6])?,
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecisionTree::from_nodes(nodes, n_features)?)
}

fn push_tree(d: &mut ModelDocument, name: &str, t: &DecisionTree) {
    d.push_tensor(name, vec![t.nodes().len(), NODE_COLUMNS], nodes_tensor(t));
}

fn stored_tree(d: &ModelDocument, name: &str, n_features: usize, path: &Path) -> Result<DecisionTree> {
    let t = d
        .tensor(name)
        .ok_or_else(|| Error::format(path, format!("missing tensor `{name}`")))?;
    if t.shape.len() != 2 || t.shape[1] != NODE_COLUMNS {
        return Err(Error::format(path, format!("tensor `{name}` is not a node table")));
    }
    tree_from_tensor(&t.data, n_features, path)
}

pub fn classic_document(m: &StoredClassic) -> ModelDocument {
    let kind = match m.model {
        ClassicModel::Tree(_) => TREE_KIND,
        ClassicModel::Forest(_) => FOREST_KIND,
        ClassicModel::Logistic(_) => LOGISTIC_KIND,
    };
    let mut d = ModelDocument::new(kind);
    d.push_meta("feature_count", m.features.len());
    for f in &m.features {
        d.push_meta("feature", f);
    }
    match &m.model {
        ClassicModel::Tree(t) => push_tree(&mut d, "nodes", t),
        ClassicModel::Forest(f) => {
            d.push_meta("n_trees", f.trees().len());
            for (i, (t, seed)) in f.trees().iter().zip(f.tree_seeds()).enumerate() {
                d.push_meta("tree_seed", seed);
                push_tree(&mut d, &format!("tree.{i}.nodes"), t);
            }
        }
        ClassicModel::Logistic(l) => d.push_params("", l),
    }
    d
}

pub fn classic_from_document(d: &ModelDocument, path: &Path) -> Result<StoredClassic> {
    let n: usize = d.meta_parse("feature_count", path)?;
    let features: Vec<String> = d.meta_all("feature").into_iter().map(String::from).collect();
    if features.len() != n {
        return Err(Error::format(path, "feature names do not match feature_count"));
    }
    let model = match d.kind.as_str() {
        TREE_KIND => ClassicModel::Tree(stored_tree(d, "nodes", n, path)?),
        FOREST_KIND => {
            let n_trees: usize = d.meta_parse("n_trees", path)?;
            let seeds = d
                .meta_all("tree_seed")
                .into_iter()
                .map(|s| s.parse::<u64>().map_err(|_| Error::format(path, format!("bad tree seed `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            let trees = (0..n_trees)
                .map(|i| stored_tree(d, &format!("tree.{i}.nodes"), n, path))
                .collect::<Result<Vec<_>>>()?;
            ClassicModel::Forest(RandomForest::from_trees(trees, seeds)?)
        }
        LOGISTIC_KIND => {
            let mut l = LogisticModel::zeros(n);
            d.fill_params("", &mut l, path)?;
            ClassicModel::Logistic(l)
        }
        other => return Err(Error::format(path, format!("`{other}` is not a baseline classifier"))),
    };
    Ok(StoredClassic { model, features })
}
