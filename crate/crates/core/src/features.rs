//! The eight per-video simple features and correlation-based pruning.

use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{Comment, VideoRecord};
use crate::error::{Error, Result};
use crate::lexicon::LexiconSet;
use crate::text;
use crate::title_scorer::TitleScorer;

/// Value of `dislike_like_ratio` for a video with dislikes but no likes.
pub const DISLIKE_RATIO_CAP: f64 = 1000.0;

/// Default `|r|` above which a feature pair counts as correlated.
pub const DEFAULT_CORRELATION_THRESHOLD: f64 = 0.2;

pub const FEATURE_COUNT: usize = 8;

/// Feature names, in column order.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    "has_clickbait_phrase",
    "ratio_violent_words",
    "ratio_caps",
    "title_fakeness_score",
    "dislike_like_ratio",
    "comments_fakeness",
    "comments_inappropriateness",
    "comments_conversation_ratio",
];

pub fn feature_index(name: &str) -> Option<usize> {
    FEATURE_NAMES.iter().position(|n| *n == name)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeatureVector {
    pub has_clickbait_phrase: f64,
    pub ratio_violent_words: f64,
    pub ratio_caps: f64,
    pub title_fakeness_score: f64,
    pub dislike_like_ratio: f64,
    pub comments_fakeness: f64,
    pub comments_inappropriateness: f64,
    pub comments_conversation_ratio: f64,
}

impl FeatureVector {
    pub fn to_array(&self) -> [f64; FEATURE_COUNT] {
        [
            self.has_clickbait_phrase,
            self.ratio_violent_words,
            self.ratio_caps,
            self.title_fakeness_score,
            self.dislike_like_ratio,
            self.comments_fakeness,
            self.comments_inappropriateness,
            self.comments_conversation_ratio,
        ]
    }

    pub fn from_array(a: [f64; FEATURE_COUNT]) -> Self {
        FeatureVector {
            has_clickbait_phrase: a[0],
            ratio_violent_words: a[1],
            ratio_caps: a[2],
            title_fakeness_score: a[3],
            dislike_like_ratio: a[4],
            comments_fakeness: a[5],
            comments_inappropriateness: a[6],
            comments_conversation_ratio: a[7],
        }
    }

    /// The columns listed in `selected`, in that order.
    pub fn select(&self, selected: &[usize]) -> Vec<f64> {
        let a = self.to_array();
        selected.iter().map(|&i| a[i]).collect()
    }
}

fn fraction(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

pub fn has_clickbait_phrase(title: &str, lex: &LexiconSet) -> bool {
    let title = text::normalize(title);
    lex.clickbait_phrases()
        .iter()
        .any(|p| title.contains(p.as_str()))
}

pub fn ratio_violent_words(title: &str, lex: &LexiconSet) -> f64 {
    let tokens = text::tokenize(title);
    let hits = tokens.iter().filter(|t| lex.is_violent(t)).count();
    fraction(hits, tokens.len())
}

pub fn ratio_caps(title: &str) -> f64 {
    let tokens = text::tokenize(title);
    let hits = tokens.iter().filter(|t| text::is_all_caps(t)).count();
    fraction(hits, tokens.len())
}

/// Dislikes per like; `DISLIKE_RATIO_CAP` when there are dislikes but no
/// likes, 0 when there are neither.
pub fn dislike_like_ratio(v: &VideoRecord) -> f64 {
    match (v.like_count, v.dislike_count) {
        (0, 0) => 0.0,
        (0, _) => DISLIKE_RATIO_CAP,
        (likes, dislikes) => (dislikes as f64 / likes as f64).min(DISLIKE_RATIO_CAP),
    }
}

pub fn comment_says_fake(comment: &str, lex: &LexiconSet) -> bool {
    let text: alloc::string::String = unicode_normalization::UnicodeNormalization::nfc(comment).collect();
    lex.fakeness_patterns().iter().any(|p| p.is_match(&text))
}

pub fn comments_fakeness(comments: &[Comment], lex: &LexiconSet) -> f64 {
    let hits = comments
        .iter()
        .filter(|c| comment_says_fake(&c.text, lex))
        .count();
    fraction(hits, comments.len())
}

pub fn comments_inappropriateness(comments: &[Comment], lex: &LexiconSet) -> f64 {
    let hits = comments
        .iter()
        .filter(|c| text::tokenize(&c.text).iter().any(|t| lex.is_swear(t)))
        .count();
    fraction(hits, comments.len())
}

pub fn comments_conversation_ratio(comments: &[Comment]) -> f64 {
    let hits = comments.iter().filter(|c| c.reply_count >= 1).count();
    fraction(hits, comments.len())
}

pub fn extract_features(v: &VideoRecord, lex: &LexiconSet, scorer: &TitleScorer) -> Result<FeatureVector> {
    Ok(FeatureVector {
        has_clickbait_phrase: if has_clickbait_phrase(&v.title, lex) { 1.0 } else { 0.0 },
        ratio_violent_words: ratio_violent_words(&v.title, lex),
        ratio_caps: ratio_caps(&v.title),
        title_fakeness_score: scorer.score(&v.title, lex)?,
        dislike_like_ratio: dislike_like_ratio(v),
        comments_fakeness: comments_fakeness(&v.comments, lex),
        comments_inappropriateness: comments_inappropriateness(&v.comments, lex),
        comments_conversation_ratio: comments_conversation_ratio(&v.comments),
    })
}

/// Pearson correlation of two columns; 0 when either has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / libm::sqrt(sxx * syy)
    }
}

/// Drops, for every column pair with `|r| > threshold`, the column with the
/// lower importance (on equal importance, the higher index). Returns the
/// surviving column indices in ascending order.
pub fn prune_correlated<R: AsRef<[f64]>>(rows: &[R], importances: &[f64], threshold: f64) -> Result<Vec<usize>> {
    if rows.len() < 2 {
        return Err(Error::invalid("correlation pruning needs at least two rows"));
    }
    let d = importances.len();
    if importances.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("importances must be finite"));
    }
    let mut columns = vec![Vec::with_capacity(rows.len()); d];
    for row in rows {
        let row = row.as_ref();
        crate::error::check_dim("feature row", d, row.len())?;
        for (c, &v) in columns.iter_mut().zip(row) {
            c.push(v);
        }
    }
    let mut removed = vec![false; d];
    for a in 0..d {
        for b in a + 1..d {
            if libm::fabs(pearson(&columns[a], &columns[b])) > threshold {
                let loser = if importances[b] > importances[a] { a } else { b };
                removed[loser] = true;
            }
        }
    }
    Ok((0..d).filter(|&i| !removed[i]).collect())
}
