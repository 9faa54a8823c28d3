//! Pretrained word vectors and comment-to-sequence mapping.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{check_dim, Error, Result};
use crate::text;

/// Tokens kept per comment unless configured otherwise.
pub const DEFAULT_MAX_TOKENS: usize = 100;

/// Token → vector map with a fixed dimension. Keys are stored as given;
/// lookups use the NFC lower-cased token.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("embedding dimension must be positive"));
        }
        Ok(EmbeddingTable {
            dimension,
            vectors: BTreeMap::new(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        let token = token.into();
        check_dim("embedding row", self.dimension, vector.len())
            .map_err(|_| Error::invalid(alloc::format!(
                "token `{token}` has {} values, expected {}",
                vector.len(),
                self.dimension
            )))?;
        if vector.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(alloc::format!("token `{token}` has a non-finite component")));
        }
        if self.vectors.contains_key(&token) {
            return Err(Error::invalid(alloc::format!("duplicate token `{token}`")));
        }
        self.vectors.insert(token, vector);
        Ok(())
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    /// Entries in token order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.vectors.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

/// Vectors of the in-vocabulary tokens of `comment`, in order, at most
/// `max_tokens` of them. Unknown tokens are skipped.
pub fn embed_comment<'t>(comment: &str, table: &'t EmbeddingTable, max_tokens: usize) -> Vec<&'t [f64]> {
    let normalized = text::normalize(comment);
    text::tokenize(&normalized)
        .into_iter()
        .filter_map(|t| table.get(t))
        .take(max_tokens)
        .collect()
}
