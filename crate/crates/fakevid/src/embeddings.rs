//! Textual word-vector files: a `<vocab_size> <dimension>` header, then one
//! `token v1 ... vd` line per word.

use std::fmt::Write as _;
use std::path::Path;

use fakevid_core::embeddings::EmbeddingTable;

use crate::error::{read_to_string, write_bytes, Error, Result};

pub fn parse_embeddings(text: &str, expected_dim: Option<usize>, path: &Path) -> Result<EmbeddingTable> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::format(path, "missing `<vocab_size> <dimension>` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parsed: Option<(usize, usize)> = match fields.as_slice() {
        [v, d] => v.parse().ok().zip(d.parse().ok()),
        _ => None,
    };
    let (vocab, dim) = parsed.ok_or_else(|| Error::parse(path, 1, "expected `<vocab_size> <dimension>`"))?;
    if let Some(expected) = expected_dim.filter(|&e| e != dim) {
        return Err(Error::format(path, format!("file has dimension {dim}, expected {expected}")));
    }
    let mut table = EmbeddingTable::new(dim)?;
    for (i, raw) in lines {
        let line = i + 1;
        let mut parts = raw.split_whitespace();
        let token = parts.next().unwrap_or_default();
        let values = parts
            .map(str::parse::<f64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::parse(path, line, format!("token `{token}`: {e}")))?;
        if values.len() != dim {
            return Err(Error::parse(
                path,
                line,
                format!("token `{token}` has {} values, expected {dim}", values.len()),
            ));
        }
        table
            .insert(token, values)
            .map_err(|e| Error::parse(path, line, format!("token `{token}`: {e}")))?;
    }
    if table.len() != vocab {
        log::warn!("{}: header announces {vocab} tokens, file has {}", path.display(), table.len());
    }
    Ok(table)
}

pub fn load_embeddings(path: &Path, expected_dim: Option<usize>) -> Result<EmbeddingTable> {
    parse_embeddings(&read_to_string(path)?, expected_dim, path)
}

/// Tokens in table order, values with 17 significant digits.
pub fn embeddings_to_string(table: &EmbeddingTable) -> String {
    let mut out = format!("{} {}\n", table.len(), table.dimension());
    for (token, v) in table.iter() {
        out.push_str(token);
        for x in v {
            write!(out, " {x:.16e}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_embeddings(path: &Path, table: &EmbeddingTable) -> Result<()> {
    write_bytes(path, embeddings_to_string(table).as_bytes())
}
