//! Video/comment data model, candidate mining, splitting and annotation
//! agreement.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Fake,
    Real,
    NotSure,
    Unlabeled,
}

impl Label {
    pub const ALL: [Label; 4] = [Label::Fake, Label::Real, Label::NotSure, Label::Unlabeled];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Fake => "fake",
            Label::Real => "real",
            Label::NotSure => "not_sure",
            Label::Unlabeled => "unlabeled",
        }
    }

    pub fn parse(s: &str) -> Option<Label> {
        match s.trim() {
            "fake" => Some(Label::Fake),
            "real" => Some(Label::Real),
            "not_sure" => Some(Label::NotSure),
            "unlabeled" => Some(Label::Unlabeled),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub id: String,
    pub text: String,
    pub like_count: u64,
    pub reply_count: u64,
    /// ISO-8601 timestamp, kept verbatim.
    pub published_at: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VideoRecord {
    pub id: String,
    pub title: String,
    pub description: String,
    pub tags: Vec<String>,
    pub view_count: u64,
    pub like_count: u64,
    pub dislike_count: u64,
    pub channel_subscriber_count: u64,
    pub comments: Vec<Comment>,
    pub label: Label,
}

impl VideoRecord {
    /// Dislike-to-like ratio used by the mining heuristic. Zero likes with
    /// some dislikes is infinite; no votes at all is zero.
    pub fn mining_ratio(&self) -> f64 {
        match (self.like_count, self.dislike_count) {
            (0, 0) => 0.0,
            (0, _) => f64::INFINITY,
            (likes, dislikes) => dislikes as f64 / likes as f64,
        }
    }
}

/// A named collection of records with unique ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    name: String,
    records: Vec<VideoRecord>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, records: Vec<VideoRecord>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &records {
            if !seen.insert(r.id.as_str()) {
                return Err(Error::DuplicateId(r.id.clone()));
            }
        }
        Ok(Dataset {
            name: name.into(),
            records,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn records(&self) -> &[VideoRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<VideoRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.records.iter().filter(|r| r.label == label).count()
    }

    pub fn get(&self, id: &str) -> Option<&VideoRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    // Subsets of a valid dataset keep unique ids.
    fn subset(&self, name: String, keep: &[bool]) -> Dataset {
        let records = self
            .records
            .iter()
            .zip(keep)
            .filter(|(_, k)| **k)
            .map(|(r, _)| r.clone())
            .collect();
        Dataset { name, records }
    }
}

fn indices_by_label(d: &Dataset, label: Label) -> Vec<usize> {
    d.records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.label == label)
        .map(|(i, _)| i)
        .collect()
}

/// Stratified train/test split of positions `0..labels.len()`. The test set
/// holds `round(test_fraction * n)` items; each label group contributes its
/// proportional share, with the leftover seats going to the groups with the
/// largest fractional remainders. Returns `in_test` flags.
pub fn stratified_test_mask(labels: &[Label], test_fraction: f64, seed: u64) -> Result<Vec<bool>> {
    if labels.is_empty() {
        return Err(Error::invalid("cannot split an empty dataset"));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::invalid("test_fraction must lie strictly between 0 and 1"));
    }
    for label in [Label::Fake, Label::Real] {
        let count = labels.iter().filter(|&&l| l == label).count();
        if count < 2 {
            return Err(Error::InsufficientClass {
                class: label.as_str(),
                count,
                required: 2,
            });
        }
    }

    let n = labels.len();
    let total_test = libm::round(test_fraction * n as f64) as usize;
    let groups: Vec<Vec<usize>> = Label::ALL
        .iter()
        .map(|&l| (0..n).filter(|&i| labels[i] == l).collect::<Vec<_>>())
        .filter(|idx| !idx.is_empty())
        .collect();

    let mut quota: Vec<usize> = Vec::with_capacity(groups.len());
    let mut remainders: Vec<(f64, usize)> = Vec::with_capacity(groups.len());
    for (g, idx) in groups.iter().enumerate() {
        let ideal = test_fraction * idx.len() as f64;
        let base = libm::floor(ideal) as usize;
        quota.push(base);
        remainders.push((ideal - base as f64, g));
    }
    let assigned: usize = quota.iter().sum();
    // Largest remainder first; equal remainders go to the earlier group.
    remainders.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    for &(_, g) in remainders.iter().take(total_test.saturating_sub(assigned)) {
        quota[g] += 1;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_test = alloc::vec![false; n];
    for (idx, q) in groups.iter().zip(&quota) {
        let mut shuffled = idx.clone();
        shuffled.shuffle(&mut rng);
        for &i in shuffled.iter().take(*q) {
            in_test[i] = true;
        }
    }
    Ok(in_test)
}

/// Stratified train/test split (see [`stratified_test_mask`]). Both outputs
/// keep the input order.
pub fn split_dataset(d: &Dataset, test_fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
    let labels: Vec<Label> = d.records.iter().map(|r| r.label).collect();
    let in_test = stratified_test_mask(&labels, test_fraction, seed)?;
    let in_train: Vec<bool> = in_test.iter().map(|t| !t).collect();
    let train = d.subset(alloc::format!("{}-train", d.name), &in_train);
    let test = d.subset(alloc::format!("{}-test", d.name), &in_test);
    Ok((train, test))
}

/// Equal-size fake/real subset sampled without replacement. Records labeled
/// `not_sure` or `unlabeled` are dropped. Output keeps input order.
pub fn balance_subset(d: &Dataset, seed: u64) -> Result<Dataset> {
    let fake = indices_by_label(d, Label::Fake);
    let real = indices_by_label(d, Label::Real);
    for (label, idx) in [(Label::Fake, &fake), (Label::Real, &real)] {
        if idx.is_empty() {
            return Err(Error::InsufficientClass {
                class: label.as_str(),
                count: 0,
                required: 1,
            });
        }
    }
    let k = fake.len().min(real.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = alloc::vec![false; d.len()];
    for idx in [fake, real] {
        let mut shuffled = idx;
        shuffled.shuffle(&mut rng);
        for &i in shuffled.iter().take(k) {
            keep[i] = true;
        }
    }
    Ok(d.subset(alloc::format!("{}-balanced", d.name), &keep))
}

/// Thresholds and phrase lists for [`mine_candidates`].
#[derive(Debug, Clone, PartialEq)]
pub struct MiningConfig {
    pub seed_phrases: Vec<String>,
    /// Phrases that may join the seed set once they appear in the comments
    /// of matched videos.
    pub expansion_lexicon: Vec<String>,
    pub min_views: u64,
    pub min_comments: usize,
    pub min_dislike_like_ratio: f64,
    pub rounds: usize,
}

impl MiningConfig {
    pub fn new(seed_phrases: Vec<String>, expansion_lexicon: Vec<String>) -> Self {
        MiningConfig {
            seed_phrases,
            expansion_lexicon,
            min_views: 10_000,
            min_comments: 120,
            min_dislike_like_ratio: 0.3,
            rounds: 3,
        }
    }
}

/// Outcome of a mining run: the candidate set plus the final phrase set.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningResult {
    pub candidates: Dataset,
    pub phrases: Vec<String>,
}

/// Popularity filter, then `rounds` of seed-phrase bootstrapping over comment
/// text, then the dislike/like ratio filter. Candidates are sorted by ratio,
/// highest first, ties by id.
pub fn mine_candidates(d: &Dataset, config: &MiningConfig) -> Result<MiningResult> {
    if config.seed_phrases.iter().all(|p| p.trim().is_empty()) {
        return Err(Error::invalid("mining needs at least one seed phrase"));
    }
    if config.rounds == 0 {
        return Err(Error::invalid("mining needs at least one round"));
    }
    if !(config.min_dislike_like_ratio >= 0.0) {
        return Err(Error::invalid("min_dislike_like_ratio must be non-negative"));
    }

    let popular: Vec<(&VideoRecord, Vec<String>)> = d
        .records
        .iter()
        .filter(|r| r.view_count >= config.min_views && r.comments.len() >= config.min_comments)
        .map(|r| (r, r.comments.iter().map(|c| text::normalize(&c.text)).collect()))
        .collect();

    let mut phrases: BTreeSet<String> = config
        .seed_phrases
        .iter()
        .map(|p| text::normalize(p.trim()))
        .filter(|p| !p.is_empty())
        .collect();
    let expansion: Vec<String> = config
        .expansion_lexicon
        .iter()
        .map(|p| text::normalize(p.trim()))
        .filter(|p| !p.is_empty())
        .collect();

    let mut matched: Vec<usize> = Vec::new();
    for _ in 0..config.rounds {
        matched = popular
            .iter()
            .enumerate()
            .filter(|(_, (_, comments))| {
                comments
                    .iter()
                    .any(|c| phrases.iter().any(|p| c.contains(p.as_str())))
            })
            .map(|(i, _)| i)
            .collect();
        let found: Vec<String> = expansion
            .iter()
            .filter(|p| !phrases.contains(*p))
            .filter(|p| {
                matched
                    .iter()
                    .any(|&i| popular[i].1.iter().any(|c| c.contains(p.as_str())))
            })
            .cloned()
            .collect();
        phrases.extend(found);
    }

    let mut kept: Vec<(f64, &VideoRecord)> = matched
        .iter()
        .map(|&i| (popular[i].0.mining_ratio(), popular[i].0))
        .filter(|(ratio, _)| *ratio > config.min_dislike_like_ratio)
        .collect();
    kept.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.id.cmp(&b.1.id)));

    let candidates = Dataset {
        name: alloc::format!("{}-mined", d.name),
        records: kept.into_iter().map(|(_, r)| r.clone()).collect(),
    };
    Ok(MiningResult {
        candidates,
        phrases: phrases.into_iter().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnnotationLabel {
    Spam,
    Legitimate,
    NotSure,
}

impl AnnotationLabel {
    pub const ALL: [AnnotationLabel; 3] = [
        AnnotationLabel::Spam,
        AnnotationLabel::Legitimate,
        AnnotationLabel::NotSure,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AnnotationLabel::Spam => "spam",
            AnnotationLabel::Legitimate => "legitimate",
            AnnotationLabel::NotSure => "not_sure",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "spam" => Some(AnnotationLabel::Spam),
            "legitimate" => Some(AnnotationLabel::Legitimate),
            "not_sure" => Some(AnnotationLabel::NotSure),
            _ => None,
        }
    }
}

/// One annotation pass: video id to label.
pub type AnnotationRound = BTreeMap<String, AnnotationLabel>;

/// Rows are the first round's labels, columns the second's, both in
/// spam/legitimate/not_sure order.
pub fn agreement_matrix(r1: &AnnotationRound, r2: &AnnotationRound) -> Result<[[u64; 3]; 3]> {
    let only_first: Vec<String> = r1.keys().filter(|k| !r2.contains_key(*k)).cloned().collect();
    let only_second: Vec<String> = r2.keys().filter(|k| !r1.contains_key(*k)).cloned().collect();
    if !only_first.is_empty() || !only_second.is_empty() {
        return Err(Error::KeySetMismatch {
            only_first,
            only_second,
        });
    }
    let mut m = [[0u64; 3]; 3];
    for (id, a) in r1 {
        let b = r2[id];
        m[a.index()][b.index()] += 1;
    }
    Ok(m)
}

impl core::fmt::Display for Label {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Label::parse(s).ok_or_else(|| Error::invalid(alloc::format!("unknown label `{s}`")))
    }
}

/// Convenience constructor used in tests and synthetic data.
pub fn comment(id: impl ToString, text: impl Into<String>, reply_count: u64) -> Comment {
    Comment {
        id: id.to_string(),
        text: text.into(),
        like_count: 0,
        reply_count,
        published_at: String::from("2016-01-01T00:00:00Z"),
    }
}
