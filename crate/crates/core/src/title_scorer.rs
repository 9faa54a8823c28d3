//! Small feed-forward model scoring how fake a title reads, trained on any
//! labeled-title collection. Its output is the `title_fakeness_score`
//! feature.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features;
use crate::lexicon::LexiconSet;
use crate::nn::{
    cross_entropy, seeded_rng, Activation, AdamConfig, AdamState, DenseLayer, Parameterized, Tensor,
};
use crate::text;

pub const TITLE_FEATURE_COUNT: usize = 8;

pub const TITLE_FEATURE_NAMES: [&str; TITLE_FEATURE_COUNT] = [
    "token_count",
    "char_count",
    "ratio_caps",
    "punctuation_count",
    "question_marks",
    "exclamation_marks",
    "has_clickbait_phrase",
    "ratio_violent_words",
];

/// Raw linguistic features of a title, before standardization.
pub fn title_features(title: &str, lex: &LexiconSet) -> [f64; TITLE_FEATURE_COUNT] {
    let count = |pred: fn(&char) -> bool| title.chars().filter(pred).count() as f64;
    [
        text::tokenize(title).len() as f64,
        title.chars().count() as f64,
        features::ratio_caps(title),
        count(|c| c.is_ascii_punctuation() || (!c.is_alphanumeric() && !c.is_whitespace())),
        count(|c| *c == '?'),
        count(|c| *c == '!'),
        if features::has_clickbait_phrase(title, lex) { 1.0 } else { 0.0 },
        features::ratio_violent_words(title, lex),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct TitleScorerConfig {
    pub hidden_dim: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TitleScorerConfig {
    fn default() -> Self {
        TitleScorerConfig {
            hidden_dim: 8,
            learning_rate: 1e-2,
            epochs: 200,
            batch_size: 16,
            seed: 0,
        }
    }
}

/// Two dense layers: ReLU hidden, softmax over (real, fake).
#[derive(Debug, Clone, PartialEq)]
pub struct TitleNet {
    pub hidden: DenseLayer,
    pub output: DenseLayer,
}

impl Parameterized for TitleNet {
    fn tensors(&self) -> Vec<Tensor<'_>> {
        let mut t: Vec<Tensor<'_>> = self.hidden.named_tensors("hidden.").into();
        t.extend(self.output.named_tensors("output."));
        t
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut t: Vec<&mut [f64]> = self.hidden.buffers_mut().into();
        t.extend(self.output.buffers_mut());
        t
    }
}

impl TitleNet {
    /// Cross-entropy of one standardized input; class 0 is real, 1 is fake.
    pub fn loss(&self, x: &[f64], class: usize) -> Result<f64> {
        let h = self.hidden.forward(x)?;
        cross_entropy(&self.output.forward(&h)?, class)
    }

    /// Adds the gradient of [`TitleNet::loss`] to `grad`, scaled by `scale`.
    pub fn accumulate_gradient(&self, x: &[f64], class: usize, scale: f64, grad: &mut TitleNet) -> Result<f64> {
        let hc = self.hidden.forward_cached(x)?;
        let oc = self.output.forward_cached(&hc.output)?;
        let loss = cross_entropy(&oc.output, class)?;
        let mut d_out = crate::nn::loss_grad(&oc.output, class);
        d_out.iter_mut().for_each(|g| *g *= scale);
        let d_h = self.output.backward(&oc, &d_out, &mut grad.output);
        self.hidden.backward(&hc, &d_h, &mut grad.hidden);
        Ok(loss)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TitleScorer {
    pub net: TitleNet,
    /// Per-feature standardization: `(x - mean) / scale`.
    pub mean: [f64; TITLE_FEATURE_COUNT],
    pub scale: [f64; TITLE_FEATURE_COUNT],
    trained: bool,
}

impl TitleScorer {
    /// A zero-initialized model that refuses to score.
    pub fn untrained(hidden_dim: usize) -> Self {
        TitleScorer {
            net: TitleNet {
                hidden: DenseLayer::zeros(TITLE_FEATURE_COUNT, hidden_dim, Activation::Relu),
                output: DenseLayer::zeros(hidden_dim, 2, Activation::Softmax),
            },
            mean: [0.0; TITLE_FEATURE_COUNT],
            scale: [1.0; TITLE_FEATURE_COUNT],
            trained: false,
        }
    }

    /// Rebuilds a trained scorer from stored parameters.
    pub fn from_parts(net: TitleNet, mean: [f64; TITLE_FEATURE_COUNT], scale: [f64; TITLE_FEATURE_COUNT]) -> Result<Self> {
        crate::error::check_dim("title net input", TITLE_FEATURE_COUNT, net.hidden.input_dim())?;
        crate::error::check_dim("title net output", 2, net.output.output_dim())?;
        crate::error::check_dim("title net hidden", net.hidden.output_dim(), net.output.input_dim())?;
        if scale.iter().any(|s| !(*s > 0.0)) {
            return Err(Error::invalid("title scorer scale must be positive"));
        }
        Ok(TitleScorer {
            net,
            mean,
            scale,
            trained: true,
        })
    }

    pub fn is_trained(&self) -> bool {
        self.trained
    }

    pub fn standardize(&self, raw: &[f64; TITLE_FEATURE_COUNT]) -> Vec<f64> {
        raw.iter()
            .zip(self.mean.iter().zip(&self.scale))
            .map(|(x, (m, s))| (x - m) / s)
            .collect()
    }

    /// Probability that the title belongs to a fake video.
    pub fn score(&self, title: &str, lex: &LexiconSet) -> Result<f64> {
        if !self.trained {
            return Err(Error::UntrainedScorer);
        }
        let x = self.standardize(&title_features(title, lex));
        let h = self.net.hidden.forward(&x)?;
        Ok(self.net.output.forward(&h)?[1])
    }
}

/// Class index used by every two-way softmax in this crate.
pub(crate) fn class_index(label: Label) -> Result<usize> {
    match label {
        Label::Real => Ok(0),
        Label::Fake => Ok(1),
        other => Err(Error::invalid(alloc::format!(
            "training needs fake/real labels, found `{}`",
            other.as_str()
        ))),
    }
}

pub fn train_title_scorer(titles: &[(String, Label)], lex: &LexiconSet, config: &TitleScorerConfig) -> Result<TitleScorer> {
    if titles.is_empty() {
        return Err(Error::invalid("no training titles"));
    }
    if config.batch_size == 0 || config.hidden_dim == 0 {
        return Err(Error::invalid("batch_size and hidden_dim must be positive"));
    }
    let classes = titles
        .iter()
        .map(|(_, l)| class_index(*l))
        .collect::<Result<Vec<_>>>()?;
    for (c, label) in [(0, Label::Real), (1, Label::Fake)] {
        if !classes.contains(&c) {
            return Err(Error::InsufficientClass {
                class: label.as_str(),
                count: 0,
                required: 1,
            });
        }
    }

    let raw: Vec<[f64; TITLE_FEATURE_COUNT]> = titles.iter().map(|(t, _)| title_features(t, lex)).collect();
    let n = raw.len() as f64;
    let mut mean = [0.0; TITLE_FEATURE_COUNT];
    let mut scale = [1.0; TITLE_FEATURE_COUNT];
    for j in 0..TITLE_FEATURE_COUNT {
        mean[j] = raw.iter().map(|r| r[j]).sum::<f64>() / n;
        let var = raw.iter().map(|r| (r[j] - mean[j]) * (r[j] - mean[j])).sum::<f64>() / n;
        if var > 0.0 {
            scale[j] = libm::sqrt(var);
        }
    }

    let mut rng = seeded_rng(config.seed);
    let mut scorer = TitleScorer {
        net: TitleNet {
            hidden: DenseLayer::glorot(&mut rng, TITLE_FEATURE_COUNT, config.hidden_dim, Activation::Relu),
            output: DenseLayer::glorot(&mut rng, config.hidden_dim, 2, Activation::Softmax),
        },
        mean,
        scale,
        trained: true,
    };
    let inputs: Vec<Vec<f64>> = raw.iter().map(|r| scorer.standardize(r)).collect();
    let mut adam = AdamState::new(AdamConfig::with_learning_rate(config.learning_rate), &scorer.net);
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(config.batch_size) {
            let mut grad = scorer.net.zeros_like();
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                scorer.net.accumulate_gradient(&inputs[i], classes[i], scale, &mut grad)?;
            }
            adam.update(&mut scorer.net, &grad)?;
        }
    }
    if !scorer.net.all_finite() {
        return Err(Error::NonFiniteLoss);
    }
    Ok(scorer)
}
