//! Unified Comments Net.
//!
//! Every comment is run through an LSTM over its word vectors; the final
//! hidden state is the comment embedding. A sigmoid unit over the comment's
//! fakeness vector (one bit per indicator phrase) gives the comment a weight
//! in (0, 1). The weighted embeddings are averaged into one unified comments
//! embedding per video, concatenated with the video's simple features and
//! passed through a ReLU layer of width 4 and a two-way softmax that reads
//! as (p_real, p_fake).
//!
//! Comments are grouped by content before pooling: identical comments are
//! evaluated once and weighted by their multiplicity, and the groups are
//! summed in a canonical order. This makes the unified embedding exactly
//! invariant to comment order and to duplicating every comment.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::seq::SliceRandom;

use crate::corpus::{Comment, Dataset, Label, VideoRecord};
use crate::embeddings::{embed_comment, EmbeddingTable, DEFAULT_MAX_TOKENS};
use crate::error::{check_dim, Error, Result};
use crate::parallel::{BatchMap, Sequential};
use crate::nn::{
    cross_entropy, seeded_rng, Activation, AdamConfig, AdamState, DenseCache, DenseLayer, LstmCell, LstmTrace,
    Parameterized, Tensor,
};
use crate::text;
use crate::title_scorer::class_index;

/// Width of the ReLU layer between the pooled input and the softmax.
pub const HEAD_DIM: usize = 4;

pub const DEFAULT_HIDDEN_DIM: usize = 300;

pub const DEFAULT_MAX_COMMENTS: usize = 200;

/// Binary presence vector of the configured fakeness-indicator phrases.
#[derive(Debug, Clone, PartialEq)]
pub struct FakenessVector(Vec<f64>);

impl From<Vec<f64>> for FakenessVector {
    fn from(bits: Vec<f64>) -> Self {
        FakenessVector(bits)
    }
}

impl FakenessVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of the phrases that are present.
    pub fn active(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] == 1.0).collect()
    }
}

/// Bit `i` is set iff phrase `i` occurs in the comment (case-insensitive
/// substring after NFC normalization).
pub fn fakeness_vector(comment_text: &str, phrases: &[String]) -> FakenessVector {
    let normalized = text::normalize(comment_text);
    FakenessVector(
        phrases
            .iter()
            .map(|p| {
                let p = text::normalize(p);
                if !p.is_empty() && normalized.contains(p.as_str()) {
                    1.0
                } else {
                    0.0
                }
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UcnetShape {
    pub embedding_dim: usize,
    pub hidden_dim: usize,
    pub phrase_count: usize,
    pub feature_count: usize,
}

/// All learnable parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct UcnetParams {
    pub lstm: LstmCell,
    /// phrase_count → 1, sigmoid.
    pub weight_head: DenseLayer,
    /// hidden_dim + feature_count → 4, ReLU.
    pub hidden: DenseLayer,
    /// 4 → 2, softmax over (real, fake).
    pub output: DenseLayer,
}

impl Parameterized for UcnetParams {
    fn tensors(&self) -> Vec<Tensor<'_>> {
        let mut t: Vec<Tensor<'_>> = self.lstm.named_tensors("lstm.").into();
        t.extend(self.weight_head.named_tensors("weight_head."));
        t.extend(self.hidden.named_tensors("hidden."));
        t.extend(self.output.named_tensors("output."));
        t
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        let mut t: Vec<&mut [f64]> = self.lstm.buffers_mut().into();
        t.extend(self.weight_head.buffers_mut());
        t.extend(self.hidden.buffers_mut());
        t.extend(self.output.buffers_mut());
        t
    }
}

impl UcnetParams {
    pub fn zeros(shape: UcnetShape) -> Self {
        UcnetParams {
            lstm: LstmCell::zeros(shape.embedding_dim, shape.hidden_dim),
            weight_head: DenseLayer::zeros(shape.phrase_count, 1, Activation::Sigmoid),
            hidden: DenseLayer::zeros(shape.hidden_dim + shape.feature_count, HEAD_DIM, Activation::Relu),
            output: DenseLayer::zeros(HEAD_DIM, 2, Activation::Softmax),
        }
    }

    /// Glorot-uniform weights from a seeded generator; zero biases except
    /// the LSTM forget gate (1.0).
    pub fn init(shape: UcnetShape, seed: u64) -> Self {
        let mut rng = seeded_rng(seed);
        UcnetParams {
            lstm: LstmCell::glorot(&mut rng, shape.embedding_dim, shape.hidden_dim),
            weight_head: DenseLayer::glorot(&mut rng, shape.phrase_count, 1, Activation::Sigmoid),
            hidden: DenseLayer::glorot(&mut rng, shape.hidden_dim + shape.feature_count, HEAD_DIM, Activation::Relu),
            output: DenseLayer::glorot(&mut rng, HEAD_DIM, 2, Activation::Softmax),
        }
    }

    pub fn shape(&self) -> UcnetShape {
        UcnetShape {
            embedding_dim: self.lstm.input_dim,
            hidden_dim: self.lstm.hidden_dim,
            phrase_count: self.weight_head.input_dim(),
            feature_count: self.hidden.input_dim() - self.lstm.hidden_dim,
        }
    }

    /// Checks that the layer dimensions chain together.
    pub fn validate(&self) -> Result<()> {
        let h = self.lstm.hidden_dim;
        check_dim("lstm input weights rows", 4 * h, self.lstm.w_input.rows())?;
        check_dim("lstm input weights cols", self.lstm.input_dim, self.lstm.w_input.cols())?;
        check_dim("lstm hidden weights", 4 * h * h, self.lstm.w_hidden.as_slice().len())?;
        check_dim("lstm bias", 4 * h, self.lstm.bias.len())?;
        check_dim("weight head output", 1, self.weight_head.output_dim())?;
        if self.hidden.input_dim() < h {
            return Err(Error::invalid("hidden layer narrower than the comment embedding"));
        }
        check_dim("hidden layer output", HEAD_DIM, self.hidden.output_dim())?;
        check_dim("output layer input", HEAD_DIM, self.output.input_dim())?;
        check_dim("output layer output", 2, self.output.output_dim())?;
        Ok(())
    }

    /// `sigmoid(w · fv + b)`
    pub fn comment_weight(&self, fv: &FakenessVector) -> Result<f64> {
        Ok(self.weight_head.forward(fv.as_slice())?[0])
    }
}

/// One distinct comment, ready for the network.
#[derive(Debug, Clone, PartialEq)]
pub struct CommentInput {
    pub sequence: Vec<Vec<f64>>,
    pub fakeness: FakenessVector,
    /// How many of the video's comments had exactly this content.
    pub multiplicity: usize,
}

fn cmp_f64s(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

fn cmp_content(a: &CommentInput, b: &CommentInput) -> Ordering {
    cmp_f64s(a.fakeness.as_slice(), b.fakeness.as_slice())
        .then_with(|| a.sequence.len().cmp(&b.sequence.len()))
        .then_with(|| {
            for (x, y) in a.sequence.iter().zip(&b.sequence) {
                match cmp_f64s(x, y) {
                    Ordering::Equal => {}
                    other => return other,
                }
            }
            Ordering::Equal
        })
}

/// A video reduced to what the network consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoInput {
    /// Distinct comments in canonical order.
    pub comments: Vec<CommentInput>,
    /// Total number of comments, counting duplicates.
    pub comment_count: usize,
    pub features: Vec<f64>,
}

impl VideoInput {
    pub fn new(raw: Vec<(Vec<Vec<f64>>, FakenessVector)>, features: Vec<f64>) -> Self {
        let comment_count = raw.len();
        let mut items: Vec<CommentInput> = raw
            .into_iter()
            .map(|(sequence, fakeness)| CommentInput {
                sequence,
                fakeness,
                multiplicity: 1,
            })
            .collect();
        items.sort_by(cmp_content);
        let mut comments: Vec<CommentInput> = Vec::with_capacity(items.len());
        for item in items {
            match comments.last_mut() {
                Some(last) if cmp_content(last, &item) == Ordering::Equal => last.multiplicity += 1,
                _ => comments.push(item),
            }
        }
        VideoInput {
            comments,
            comment_count,
            features,
        }
    }
}

/// Two-way output of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub p_real: f64,
    pub p_fake: f64,
}

/// Fake iff `p_fake >= 0.5`; an exact tie is flagged as fake.
pub fn classify(p: Prediction) -> Label {
    if p.p_fake >= 0.5 {
        Label::Fake
    } else {
        Label::Real
    }
}

struct CommentCache {
    trace: LstmTrace,
    weight: DenseCache,
    coefficient: f64,
}

struct ForwardCache {
    comments: Vec<CommentCache>,
    hidden: DenseCache,
    output: DenseCache,
}

impl UcnetParams {
    fn pooled(&self, input: &VideoInput) -> Result<(Vec<f64>, Vec<CommentCache>)> {
        let h = self.lstm.hidden_dim;
        let mut unified = vec![0.0; h];
        let mut caches = Vec::with_capacity(input.comments.len());
        for c in &input.comments {
            let trace = self.lstm.forward_trace(&c.sequence)?;
            let weight = self.weight_head.forward_cached(c.fakeness.as_slice())?;
            let coefficient = c.multiplicity as f64 / input.comment_count as f64;
            let scale = coefficient * weight.output[0];
            for (u, e) in unified.iter_mut().zip(trace.hidden()) {
                *u += scale * e;
            }
            caches.push(CommentCache {
                trace,
                weight,
                coefficient,
            });
        }
        Ok((unified, caches))
    }

    /// Mean of weight-scaled comment embeddings; zeros without comments.
    pub fn unified_embedding(&self, input: &VideoInput) -> Result<Vec<f64>> {
        Ok(self.pooled(input)?.0)
    }

    fn forward_cached(&self, input: &VideoInput) -> Result<ForwardCache> {
        check_dim(
            "simple features",
            self.hidden.input_dim() - self.lstm.hidden_dim,
            input.features.len(),
        )?;
        let (mut z, comments) = self.pooled(input)?;
        z.extend_from_slice(&input.features);
        let hidden = self.hidden.forward_cached(&z)?;
        let output = self.output.forward_cached(&hidden.output)?;
        Ok(ForwardCache {
            comments,
            hidden,
            output,
        })
    }

    pub fn predict(&self, input: &VideoInput) -> Result<Prediction> {
        let out = self.forward_cached(input)?.output.output;
        Ok(Prediction {
            p_real: out[0],
            p_fake: out[1],
        })
    }

    /// Cross-entropy of one video; class 0 is real, 1 is fake.
    pub fn loss(&self, input: &VideoInput, class: usize) -> Result<f64> {
        cross_entropy(&self.forward_cached(input)?.output.output, class)
    }

    /// Returns the loss and adds `scale` times its gradient to `grad`.
    pub fn accumulate_gradient(&self, input: &VideoInput, class: usize, scale: f64, grad: &mut UcnetParams) -> Result<f64> {
        let cache = self.forward_cached(input)?;
        let loss = cross_entropy(&cache.output.output, class)?;
        let mut d_out = crate::nn::loss_grad(&cache.output.output, class);
        d_out.iter_mut().for_each(|g| *g *= scale);
        let d_head = self.output.backward(&cache.output, &d_out, &mut grad.output);
        let d_z = self.hidden.backward(&cache.hidden, &d_head, &mut grad.hidden);
        let d_unified = &d_z[..self.lstm.hidden_dim];
        for c in &cache.comments {
            let w = c.weight.output[0];
            let embedding = c.trace.hidden();
            let d_weight: f64 = c.coefficient * crate::nn::dot(d_unified, embedding);
            self.weight_head.backward(&c.weight, &[d_weight], &mut grad.weight_head);
            if !c.trace.is_empty() {
                let d_embedding: Vec<f64> = d_unified.iter().map(|d| d * c.coefficient * w).collect();
                self.lstm.backward(&c.trace, &d_embedding, &mut grad.lstm);
            }
        }
        Ok(loss)
    }
}

/// Limits applied when turning a video into a [`VideoInput`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputLimits {
    pub max_comments_per_video: usize,
    pub max_tokens_per_comment: usize,
}

impl Default for InputLimits {
    fn default() -> Self {
        InputLimits {
            max_comments_per_video: DEFAULT_MAX_COMMENTS,
            max_tokens_per_comment: DEFAULT_MAX_TOKENS,
        }
    }
}

/// The most recent `max` comments (ISO-8601 timestamps sort as text); ties
/// keep their original order.
pub fn recent_comments(comments: &[Comment], max: usize) -> Vec<&Comment> {
    let mut sorted: Vec<&Comment> = comments.iter().collect();
    sorted.sort_by(|a, b| b.published_at.cmp(&a.published_at));
    sorted.truncate(max);
    sorted
}

pub fn prepare_comments(
    comments: &[Comment],
    features: &[f64],
    table: &EmbeddingTable,
    phrases: &[String],
    limits: InputLimits,
) -> VideoInput {
    let raw = recent_comments(comments, limits.max_comments_per_video)
        .into_iter()
        .map(|c| {
            let seq = embed_comment(&c.text, table, limits.max_tokens_per_comment)
                .into_iter()
                .map(<[f64]>::to_vec)
                .collect();
            (seq, fakeness_vector(&c.text, phrases))
        })
        .collect();
    VideoInput::new(raw, features.to_vec())
}

/// A trained network plus everything needed to feed it.
#[derive(Debug, Clone, PartialEq)]
pub struct UcnetModel {
    pub params: UcnetParams,
    pub phrases: Vec<String>,
    pub limits: InputLimits,
    /// Simple features enter the network as `(x - mean) / scale`.
    feature_mean: Vec<f64>,
    feature_scale: Vec<f64>,
}

impl UcnetModel {
    pub fn new(params: UcnetParams, phrases: Vec<String>, limits: InputLimits) -> Result<Self> {
        params.validate()?;
        if phrases.is_empty() {
            return Err(Error::invalid("the phrase list is empty"));
        }
        check_dim("phrase count", params.weight_head.input_dim(), phrases.len())?;
        let n = params.shape().feature_count;
        Ok(UcnetModel {
            params,
            phrases,
            limits,
            feature_mean: vec![0.0; n],
            feature_scale: vec![1.0; n],
        })
    }

    /// Sets the standardization applied to the simple features.
    pub fn with_feature_scaling(mut self, mean: Vec<f64>, scale: Vec<f64>) -> Result<Self> {
        let n = self.params.shape().feature_count;
        check_dim("feature means", n, mean.len())?;
        check_dim("feature scales", n, scale.len())?;
        if mean.iter().any(|m| !m.is_finite()) || scale.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::invalid("feature scaling must be finite with positive scales"));
        }
        self.feature_mean = mean;
        self.feature_scale = scale;
        Ok(self)
    }

    pub fn feature_mean(&self) -> &[f64] {
        &self.feature_mean
    }

    pub fn feature_scale(&self) -> &[f64] {
        &self.feature_scale
    }

    pub fn fakeness_vector(&self, comment_text: &str) -> FakenessVector {
        fakeness_vector(comment_text, &self.phrases)
    }

    pub fn comment_weight(&self, fv: &FakenessVector) -> Result<f64> {
        self.params.comment_weight(fv)
    }

    pub fn prepare(&self, comments: &[Comment], features: &[f64], table: &EmbeddingTable) -> Result<VideoInput> {
        check_dim("embedding dimension", self.params.lstm.input_dim, table.dimension())?;
        let scaled: Vec<f64> = if features.is_empty() {
            Vec::new()
        } else {
            check_dim("simple features", self.feature_mean.len(), features.len())?;
            features
                .iter()
                .zip(self.feature_mean.iter().zip(&self.feature_scale))
                .map(|(x, (m, s))| (x - m) / s)
                .collect()
        };
        Ok(prepare_comments(comments, &scaled, table, &self.phrases, self.limits))
    }

    pub fn unified_embedding(&self, comments: &[Comment], table: &EmbeddingTable) -> Result<Vec<f64>> {
        self.params.unified_embedding(&self.prepare(comments, &[], table)?)
    }

    /// Softmax output for one video; `features` are the selected simple
    /// features in model order.
    pub fn forward(&self, v: &VideoRecord, features: &[f64], table: &EmbeddingTable) -> Result<Prediction> {
        self.params.predict(&self.prepare(&v.comments, features, table)?)
    }
}

/// One unified embedding row per video, in dataset order.
pub fn extract_unified_embeddings(ds: &Dataset, table: &EmbeddingTable, model: &UcnetModel) -> Result<Vec<Vec<f64>>> {
    ds.records()
        .iter()
        .map(|v| model.unified_embedding(&v.comments, table))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub max_comments_per_video: usize,
    pub max_tokens_per_comment: usize,
    pub hidden_dim: usize,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        TrainingConfig {
            learning_rate: 1e-4,
            epochs: 30,
            batch_size: 16,
            seed: 0,
            max_comments_per_video: DEFAULT_MAX_COMMENTS,
            max_tokens_per_comment: DEFAULT_MAX_TOKENS,
            hidden_dim: DEFAULT_HIDDEN_DIM,
        }
    }
}

impl TrainingConfig {
    pub fn limits(&self) -> InputLimits {
        InputLimits {
            max_comments_per_video: self.max_comments_per_video,
            max_tokens_per_comment: self.max_tokens_per_comment,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0)
            || self.batch_size == 0
            || self.max_comments_per_video == 0
            || self.max_tokens_per_comment == 0
            || self.hidden_dim == 0
        {
            return Err(Error::invalid("training configuration values must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingOutcome {
    pub model: UcnetModel,
    /// Mean training loss of each epoch, measured during that epoch.
    pub epoch_losses: Vec<f64>,
}

/// Column means and population standard deviations (1 for constant columns).
fn column_scaling(rows: &[Vec<f64>], d: usize) -> (Vec<f64>, Vec<f64>) {
    let n = rows.len().max(1) as f64;
    let mean: Vec<f64> = (0..d).map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let scale = (0..d)
        .map(|j| {
            let var = rows.iter().map(|r| (r[j] - mean[j]) * (r[j] - mean[j])).sum::<f64>() / n;
            if var > 0.0 {
                libm::sqrt(var)
            } else {
                1.0
            }
        })
        .collect();
    (mean, scale)
}

/// Mini-batch Adam on cross-entropy. The simple features are standardized
/// with statistics of the training rows, stored in the model. `features[i]` are the simple features
/// of `train_set.records()[i]`.
pub fn train(
    train_set: &Dataset,
    features: &[Vec<f64>],
    table: &EmbeddingTable,
    phrases: &[String],
    config: &TrainingConfig,
) -> Result<TrainingOutcome> {
    train_with(train_set, features, table, phrases, config, &Sequential)
}

pub fn train_with<M: BatchMap>(
    train_set: &Dataset,
    features: &[Vec<f64>],
    table: &EmbeddingTable,
    phrases: &[String],
    config: &TrainingConfig,
    executor: &M,
) -> Result<TrainingOutcome> {
    config.validate()?;
    check_dim("feature rows", train_set.len(), features.len())?;
    let feature_count = features.first().map_or(0, Vec::len);
    for row in features {
        check_dim("feature row", feature_count, row.len())?;
    }
    let classes = train_set
        .records()
        .iter()
        .map(|r| class_index(r.label))
        .collect::<Result<Vec<_>>>()?;
    for (c, label) in [(0, Label::Real), (1, Label::Fake)] {
        let count = classes.iter().filter(|&&k| k == c).count();
        if count == 0 {
            return Err(Error::InsufficientClass {
                class: label.as_str(),
                count,
                required: 1,
            });
        }
    }

    let shape = UcnetShape {
        embedding_dim: table.dimension(),
        hidden_dim: config.hidden_dim,
        phrase_count: phrases.len(),
        feature_count,
    };
    let (mean, scale) = column_scaling(features, feature_count);
    let mut model = UcnetModel::new(UcnetParams::init(shape, config.seed), phrases.to_vec(), config.limits())?
        .with_feature_scaling(mean, scale)?;
    let inputs: Vec<VideoInput> = train_set
        .records()
        .iter()
        .zip(features)
        .map(|(v, f)| model.prepare(&v.comments, f, table))
        .collect::<Result<_>>()?;

    let mut adam = AdamState::new(AdamConfig::with_learning_rate(config.learning_rate), &model.params);
    let mut rng = seeded_rng(config.seed ^ 0x5eed_5eed_5eed_5eed);
    let mut order: Vec<usize> = (0..inputs.len()).collect();
    let mut epoch_losses = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for batch in order.chunks(config.batch_size) {
            let params = &model.params;
            let scale = 1.0 / batch.len() as f64;
            let results = executor.map(batch.len(), |k| {
                let i = batch[k];
                let mut g = params.zeros_like();
                params
                    .accumulate_gradient(&inputs[i], classes[i], scale, &mut g)
                    .map(|loss| (loss, g))
            });
            let mut grad = model.params.zeros_like();
            for r in results {
                let (loss, g) = r?;
                total += loss;
                grad.add_scaled(&g, 1.0);
            }
            adam.update(&mut model.params, &grad)?;
        }
        let mean = total / inputs.len() as f64;
        if !mean.is_finite() {
            return Err(Error::NonFiniteLoss);
        }
        epoch_losses.push(mean);
    }
    Ok(TrainingOutcome { model, epoch_losses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::comment;
    use crate::lexicon::builtin_fakeness_phrases;
    use crate::nn::{gradient_check, sigmoid, Matrix};

    fn small_shape() -> UcnetShape {
        UcnetShape {
            embedding_dim: 4,
            hidden_dim: 3,
            phrase_count: 2,
            feature_count: 2,
        }
    }

    #[test]
    fn fakeness_vector_examples() {
        let phrases = builtin_fakeness_phrases();
        let idx = phrases.iter().position(|p| p == "looks almost real").unwrap();
        let fv = fakeness_vector("This looks almost real to me", &phrases);
        assert_eq!(fv.as_slice()[idx], 1.0);
        assert_eq!(fv.len(), 30);
        assert!(fakeness_vector("", &phrases).active().is_empty());
    }

    #[test]
    fn zero_weight_head_gives_half() {
        let params = UcnetParams::zeros(small_shape());
        for bits in [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]] {
            assert_eq!(params.comment_weight(&FakenessVector(bits.to_vec())).unwrap(), 0.5);
        }
    }

    #[test]
    fn two_phrase_weight_by_hand() {
        let mut params = UcnetParams::zeros(small_shape());
        params.weight_head.weights = Matrix::from_vec(1, 2, vec![0.8, -1.5]).unwrap();
        params.weight_head.bias = vec![0.25];
        let w = params.comment_weight(&FakenessVector(vec![1.0, 1.0])).unwrap();
        let hand = 1.0 / (1.0 + libm::exp(-(0.8 - 1.5 + 0.25)));
        assert!((w - hand).abs() < 1e-15);
        assert!(w > 0.0 && w < 1.0);
    }

    #[test]
    fn classify_rule() {
        let p = |r: f64, f: f64| Prediction { p_real: r, p_fake: f };
        assert_eq!(classify(p(0.3, 0.7)), Label::Fake);
        assert_eq!(classify(p(0.7, 0.3)), Label::Real);
        assert_eq!(classify(p(0.5, 0.5)), Label::Fake);
    }

    #[test]
    fn zero_head_predicts_even_odds() {
        let mut params = UcnetParams::init(small_shape(), 4);
        params.output = DenseLayer::zeros(HEAD_DIM, 2, Activation::Softmax);
        let input = VideoInput::new(vec![(vec![vec![0.1, 0.2, 0.3, 0.4]], FakenessVector(vec![1.0, 0.0]))], vec![0.5, 1.0]);
        let p = params.predict(&input).unwrap();
        assert_eq!((p.p_real, p.p_fake), (0.5, 0.5));
        assert!(params.predict(&VideoInput::new(vec![], vec![1.0])).is_err());
    }

    #[test]
    fn reduced_network_hand_trace() {
        let mut table = EmbeddingTable::new(4).unwrap();
        table.insert("fake", vec![0.5, -0.25, 0.75, 0.1]).unwrap();
        table.insert("clip", vec![-0.3, 0.6, 0.2, -0.8]).unwrap();
        let shape = UcnetShape {
            embedding_dim: 4,
            hidden_dim: 4,
            phrase_count: 2,
            feature_count: 1,
        };
        let params = UcnetParams::init(shape, 21);
        let phrases = vec![String::from("fake"), String::from("hoax")];
        let model = UcnetModel::new(params.clone(), phrases, InputLimits::default()).unwrap();
        let mut video = crate::synthetic::blank_video("v", Label::Fake);
        video.comments = vec![comment(1, "fake clip", 0), comment(2, "clip", 1)];
        let p = model.forward(&video, &[0.3], &table).unwrap();

        // Hand trace: independent LSTM recurrence, explicit pooling and head.
        let lstm = |words: &[&[f64]]| -> Vec<f64> {
            let c = &params.lstm;
            let h = 4;
            let (mut hs, mut cs) = (vec![0.0; h], vec![0.0; h]);
            for x in words {
                let prev = hs.clone();
                for j in 0..h {
                    let pre = |b: usize| {
                        let r = b * h + j;
                        c.bias[r]
                            + (0..4).map(|k| c.w_input.get(r, k) * x[k]).sum::<f64>()
                            + (0..h).map(|k| c.w_hidden.get(r, k) * prev[k]).sum::<f64>()
                    };
                    let (i, f, o, g) = (sigmoid(pre(0)), sigmoid(pre(1)), sigmoid(pre(2)), pre(3).tanh());
                    cs[j] = f * cs[j] + i * g;
                    hs[j] = o * cs[j].tanh();
                }
            }
            hs
        };
        let fake = table.get("fake").unwrap();
        let clip = table.get("clip").unwrap();
        let e1 = lstm(&[fake, clip]);
        let e2 = lstm(&[clip]);
        let wh = &params.weight_head;
        let w1 = sigmoid(wh.weights.get(0, 0) + wh.bias[0]);
        let w2 = sigmoid(wh.bias[0]);
        let mut z: Vec<f64> = (0..4).map(|j| (w1 * e1[j] + w2 * e2[j]) / 2.0).collect();
        z.push(0.3);
        let a: Vec<f64> = (0..HEAD_DIM)
            .map(|r| {
                let s = params.hidden.bias[r] + (0..5).map(|k| params.hidden.weights.get(r, k) * z[k]).sum::<f64>();
                s.max(0.0)
            })
            .collect();
        let logits: Vec<f64> = (0..2)
            .map(|r| params.output.bias[r] + (0..HEAD_DIM).map(|k| params.output.weights.get(r, k) * a[k]).sum::<f64>())
            .collect();
        let p_fake = 1.0 / (1.0 + (logits[0] - logits[1]).exp());
        assert!((p.p_fake - p_fake).abs() < 1e-10);
        assert!((p.p_real + p.p_fake - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gradient_matches_finite_differences_on_small_net() {
        let params = UcnetParams::init(small_shape(), 8);
        let seq = |k: usize, n: usize| -> Vec<Vec<f64>> {
            (0..n).map(|t| (0..4).map(|d| (((k * 7 + t * 4 + d) as f64) * 0.61).sin()).collect()).collect()
        };
        let input = VideoInput::new(
            vec![
                (seq(0, 3), FakenessVector(vec![1.0, 0.0])),
                (seq(1, 2), FakenessVector(vec![1.0, 1.0])),
                (vec![], FakenessVector(vec![0.0, 1.0])),
            ],
            vec![0.4, -0.7],
        );
        let mut grad = params.zeros_like();
        params.accumulate_gradient(&input, 1, 1.0, &mut grad).unwrap();
        let check = gradient_check(&params, &grad, 1e-5, |p| p.loss(&input, 1)).unwrap();
        assert!(check.max_relative_error < 1e-4, "{check:?}");
    }

    #[test]
    fn epochs_zero_returns_initialization() {
        let (ds, table) = crate::synthetic::tiny_corpus();
        let features = vec![vec![0.0]; ds.len()];
        let phrases = builtin_fakeness_phrases();
        let config = TrainingConfig {
            epochs: 0,
            hidden_dim: 4,
            ..TrainingConfig::default()
        };
        let out = train(&ds, &features, &table, &phrases, &config).unwrap();
        let shape = UcnetShape {
            embedding_dim: table.dimension(),
            hidden_dim: 4,
            phrase_count: phrases.len(),
            feature_count: 1,
        };
        assert_eq!(out.model.params, UcnetParams::init(shape, config.seed));
        assert!(out.epoch_losses.is_empty());
    }

    #[test]
    fn single_class_training_is_rejected() {
        let (ds, table) = crate::synthetic::tiny_corpus();
        let fakes: Vec<VideoRecord> = ds.records().iter().filter(|r| r.label == Label::Fake).cloned().collect();
        let ds = Dataset::new("fakes", fakes).unwrap();
        let features = vec![vec![]; ds.len()];
        let r = train(&ds, &features, &table, &builtin_fakeness_phrases(), &TrainingConfig::default());
        assert!(matches!(r, Err(Error::InsufficientClass { class: "real", .. })));
    }
}
