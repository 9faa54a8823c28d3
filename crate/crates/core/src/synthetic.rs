//! Seeded synthetic corpus with planted signal: fake videos carry
//! fakeness phrases in their comments and, usually, a clickbait title.
//! Used by tests, the acceptance suite and the `make-synthetic` command.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Comment, Dataset, Label, VideoRecord};
use crate::embeddings::EmbeddingTable;
use crate::features::comment_says_fake;
use crate::lexicon::{builtin_fakeness_phrases, parse_entries, LexiconSet, DEFAULT_CLICKBAIT_PHRASES};
use crate::nn::seeded_rng;
use crate::text;
use crate::Result;

const NEUTRAL_WORDS: &[&str] = &[
    "nice", "great", "love", "this", "song", "music", "view", "camera", "beautiful", "city", "river", "morning",
    "thanks", "sharing", "awesome", "footage", "amazing", "weather", "storm", "rain", "wind", "people", "street",
    "watch", "again", "first", "time", "here", "from", "with", "friends", "family", "happy", "good", "work",
    "keep", "going", "channel", "wow", "cool", "best", "place", "travel", "summer", "winter",
    "night", "light", "water", "road", "bridge", "tree", "park", "dog", "cat", "bird", "car", "train",
    "kitchen", "garden", "market", "school", "game", "team", "player", "goal",
];

const TITLE_TOPICS: &[&str] = &[
    "storm", "bridge", "crowd", "river", "shark", "airport", "festival", "mountain", "highway", "stadium",
    "ocean", "volcano", "market", "parade", "tornado", "village",
];

const PLAIN_TITLE_WORDS: &[&str] = &["footage", "of", "the", "near", "at", "during", "morning", "evening", "today", "video"];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub videos: usize,
    pub fake_fraction: f64,
    pub embedding_dim: usize,
    pub min_comments: usize,
    pub max_comments: usize,
    /// Probability that a fake video's title contains a clickbait phrase.
    pub fake_clickbait_rate: f64,
    pub real_clickbait_rate: f64,
    /// Lower bound on the share of a fake video's comments that carry a
    /// planted fakeness phrase.
    pub min_fake_comment_share: f64,
    /// Probability that any one comment of a fake video carries a phrase.
    pub fake_comment_rate: f64,
    /// Number of extra labeled titles produced for title-scorer training.
    pub extra_titles: usize,
    /// Length multiplier of the direction shared by all planted-phrase word
    /// vectors; each of them also gets a small random offset, so fakeness
    /// words sit close together the way related words do in trained vectors.
    pub fakeness_direction_scale: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            videos: 200,
            fake_fraction: 0.5,
            embedding_dim: 64,
            min_comments: 8,
            max_comments: 12,
            fake_clickbait_rate: 0.7,
            real_clickbait_rate: 0.1,
            min_fake_comment_share: 0.3,
            fake_comment_rate: 0.6,
            extra_titles: 200,
            fakeness_direction_scale: 2.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub dataset: Dataset,
    pub table: EmbeddingTable,
    pub titles: Vec<(String, Label)>,
}

pub fn blank_video(id: &str, label: Label) -> VideoRecord {
    VideoRecord {
        id: id.into(),
        title: String::new(),
        description: String::new(),
        tags: Vec::new(),
        view_count: 0,
        like_count: 0,
        dislike_count: 0,
        channel_subscriber_count: 0,
        comments: Vec::new(),
        label,
    }
}

/// Phrases planted into fake-video comments: the fakeness-indicator phrases
/// that the bundled fakeness patterns also recognise.
pub fn planted_phrases() -> Vec<String> {
    let lex = LexiconSet::builtin();
    builtin_fakeness_phrases()
        .into_iter()
        .filter(|p| comment_says_fake(p, &lex))
        .collect()
}

fn pick<'a, R: Rng>(rng: &mut R, items: &'a [&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or("")
}

fn words<R: Rng>(rng: &mut R, n: usize) -> String {
    let w: Vec<&str> = (0..n).map(|_| pick(rng, NEUTRAL_WORDS)).collect();
    w.join(" ")
}

fn title<R: Rng>(rng: &mut R, clickbait: bool, loud: bool, phrases: &[String]) -> String {
    let topic = pick(rng, TITLE_TOPICS);
    let mut t = if clickbait {
        let p = phrases.choose(rng).cloned().unwrap_or_default();
        alloc::format!("{p} {topic} {}", pick(rng, PLAIN_TITLE_WORDS))
    } else {
        alloc::format!("{topic} {} {} {}", pick(rng, PLAIN_TITLE_WORDS), pick(rng, PLAIN_TITLE_WORDS), pick(rng, TITLE_TOPICS))
    };
    if loud {
        t = t.to_uppercase();
        t.push_str("!!");
    }
    t
}

struct Generator<'a> {
    rng: ChaCha8Rng,
    config: &'a SyntheticConfig,
    clickbait: Vec<String>,
    planted: Vec<String>,
}

impl Generator<'_> {
    fn title_for(&mut self, label: Label) -> String {
        let fake = label == Label::Fake;
        let rate = if fake { self.config.fake_clickbait_rate } else { self.config.real_clickbait_rate };
        let clickbait = self.rng.gen_bool(rate);
        let loud = self.rng.gen_bool(if fake { 0.5 } else { 0.05 });
        title(&mut self.rng, clickbait, loud, &self.clickbait)
    }

    fn video(&mut self, index: usize, label: Label) -> VideoRecord {
        let fake = label == Label::Fake;
        let n = self.rng.gen_range(self.config.min_comments..=self.config.max_comments);
        let min_planted = libm::ceil(self.config.min_fake_comment_share * n as f64) as usize;
        let planted = if fake {
            let drawn = (0..n).filter(|_| self.rng.gen_bool(self.config.fake_comment_rate)).count();
            drawn.max(min_planted).min(n)
        } else {
            0
        };
        let mut slots: Vec<bool> = (0..n).map(|i| i < planted).collect();
        slots.shuffle(&mut self.rng);
        let comments = slots
            .iter()
            .enumerate()
            .map(|(k, &plant)| {
                let before = self.rng.gen_range(1..=4);
                let after = self.rng.gen_range(0..=3);
                let mut text = words(&mut self.rng, before);
                if plant {
                    let p = self.planted.choose(&mut self.rng).cloned().unwrap_or_default();
                    text.push(' ');
                    text.push_str(&p);
                }
                if after > 0 {
                    text.push(' ');
                    text.push_str(&words(&mut self.rng, after));
                }
                Comment {
                    id: alloc::format!("v{index:04}-c{k:02}"),
                    text,
                    like_count: self.rng.gen_range(0..50),
                    reply_count: if self.rng.gen_bool(0.3) { self.rng.gen_range(1..5) } else { 0 },
                    published_at: alloc::format!("2016-{:02}-{:02}T12:00:00Z", 1 + k % 12, 1 + (k * 7 + index) % 28),
                }
            })
            .collect();
        let likes = self.rng.gen_range(200..2000u64);
        let ratio = if fake {
            self.rng.gen_range(0.35..1.5)
        } else {
            self.rng.gen_range(0.01..0.25)
        };
        VideoRecord {
            id: alloc::format!("v{index:04}"),
            title: self.title_for(label),
            description: String::from("synthetic video"),
            tags: vec![String::from("synthetic")],
            view_count: self.rng.gen_range(10_000..500_000),
            like_count: likes,
            dislike_count: libm::round(likes as f64 * ratio) as u64,
            channel_subscriber_count: self.rng.gen_range(100..100_000),
            comments,
            label,
        }
    }
}

fn planted_tokens(planted: &[String]) -> Vec<String> {
    let mut tokens: Vec<String> = planted
        .iter()
        .flat_map(|p| {
            text::tokenize(&text::normalize(p))
                .into_iter()
                .map(String::from)
                .collect::<Vec<_>>()
        })
        .collect();
    tokens.sort();
    tokens.dedup();
    tokens
}

fn vocabulary(planted_tokens: &[String]) -> Vec<String> {
    let mut vocab: Vec<String> = NEUTRAL_WORDS.iter().map(|w| String::from(*w)).collect();
    vocab.extend(planted_tokens.iter().cloned());
    vocab.sort();
    vocab.dedup();
    vocab
}

pub fn generate(config: &SyntheticConfig) -> Result<SyntheticCorpus> {
    let planted = planted_phrases();
    let mut generator = Generator {
        rng: seeded_rng(config.seed),
        config,
        clickbait: parse_entries(DEFAULT_CLICKBAIT_PHRASES),
        planted: planted.clone(),
    };
    let n_fake = libm::round(config.fake_fraction * config.videos as f64) as usize;
    let mut labels: Vec<Label> = (0..config.videos)
        .map(|i| if i < n_fake { Label::Fake } else { Label::Real })
        .collect();
    labels.shuffle(&mut generator.rng);
    let records = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| generator.video(i, l))
        .collect();
    let dataset = Dataset::new("synthetic", records)?;

    let titles = (0..config.extra_titles)
        .map(|i| {
            let label = if i % 2 == 0 { Label::Fake } else { Label::Real };
            (generator.title_for(label), label)
        })
        .collect();

    let fakeness_tokens = planted_tokens(&planted);
    let dim = config.embedding_dim;
    let direction: Vec<f64> = (0..dim).map(|_| generator.rng.gen_range(-1.0..1.0)).collect();
    let mut table = EmbeddingTable::new(dim)?;
    for word in vocabulary(&fakeness_tokens) {
        let noise: Vec<f64> = (0..dim).map(|_| generator.rng.gen_range(-1.0..1.0)).collect();
        let v = if fakeness_tokens.binary_search(&word).is_ok() {
            direction
                .iter()
                .zip(&noise)
                .map(|(d, e)| config.fakeness_direction_scale * d + 0.3 * e)
                .collect()
        } else {
            noise
        };
        table.insert(word, v)?;
    }
    Ok(SyntheticCorpus {
        dataset,
        table,
        titles,
    })
}

/// Eight short videos (four fake, four real) over a 4-d table.
pub fn tiny_corpus() -> (Dataset, EmbeddingTable) {
    let config = SyntheticConfig {
        videos: 8,
        embedding_dim: 4,
        min_comments: 2,
        max_comments: 3,
        extra_titles: 0,
        seed: 1,
        ..SyntheticConfig::default()
    };
    let c = generate(&config).expect("tiny corpus");
    (c.dataset, c.table)
}
