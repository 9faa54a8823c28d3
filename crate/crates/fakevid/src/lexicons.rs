//! Lexicon files on disk, falling back to the bundled lists.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use fakevid_core::lexicon::{
    parse_entries, LexiconSet, DEFAULT_CLICKBAIT_PHRASES, DEFAULT_FAKENESS_PATTERNS, DEFAULT_FAKENESS_PHRASES,
    DEFAULT_SEED_PHRASES, DEFAULT_SWEAR_WORDS, DEFAULT_VIOLENT_WORDS,
};
use sha2::{Digest, Sha256};

use crate::error::{read_to_string, Result};

/// Environment variable naming the default lexicon directory.
pub const LEXICON_DIR_ENV: &str = "FAKEVID_LEXICON_DIR";

pub const CLICKBAIT_FILE: &str = "clickbait_phrases.txt";
pub const VIOLENT_FILE: &str = "violent_words.txt";
pub const SWEAR_FILE: &str = "swear_words.txt";
pub const FAKENESS_PATTERNS_FILE: &str = "fakeness_patterns.txt";
pub const FAKENESS_PHRASES_FILE: &str = "fakeness_phrases.txt";
pub const SEED_PHRASES_FILE: &str = "seed_phrases.txt";

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Digest identifying an ordered phrase list.
pub fn phrase_list_digest(phrases: &[String]) -> String {
    sha256_hex(phrases.join("\n").as_bytes())
}

#[derive(Debug, Clone)]
pub struct Lexicons {
    pub set: LexiconSet,
    pub fakeness_phrases: Vec<String>,
    pub seed_phrases: Vec<String>,
    /// File name to SHA-256 of the contents actually used.
    pub digests: BTreeMap<String, String>,
    /// Files read from disk (bundled lists are not listed).
    pub sources: Vec<PathBuf>,
}

/// The explicit directory if given, else the environment variable.
pub fn resolve_dir(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(LEXICON_DIR_ENV).map(PathBuf::from))
}

/// Loads every lexicon from `dir`, using the bundled list for any file the
/// directory does not contain.
pub fn load_lexicons(dir: Option<&Path>) -> Result<Lexicons> {
    let mut digests = BTreeMap::new();
    let mut sources = Vec::new();
    let mut read = |file: &str, bundled: &str| -> Result<Vec<String>> {
        let contents = match dir.map(|d| d.join(file)).filter(|p| p.is_file()) {
            Some(path) => {
                let text = read_to_string(&path)?;
                sources.push(path);
                text
            }
            None => bundled.to_string(),
        };
        digests.insert(file.to_string(), sha256_hex(contents.as_bytes()));
        Ok(parse_entries(&contents))
    };
    let clickbait = read(CLICKBAIT_FILE, DEFAULT_CLICKBAIT_PHRASES)?;
    let violent = read(VIOLENT_FILE, DEFAULT_VIOLENT_WORDS)?;
    let patterns = read(FAKENESS_PATTERNS_FILE, DEFAULT_FAKENESS_PATTERNS)?;
    let swear = read(SWEAR_FILE, DEFAULT_SWEAR_WORDS)?;
    let fakeness_phrases = read(FAKENESS_PHRASES_FILE, DEFAULT_FAKENESS_PHRASES)?;
    let seed_phrases = read(SEED_PHRASES_FILE, DEFAULT_SEED_PHRASES)?;
    Ok(Lexicons {
        set: LexiconSet::new(&clickbait, &violent, &patterns, &swear)?,
        fakeness_phrases,
        seed_phrases,
        digests,
        sources,
    })
}

/// Reads a one-entry-per-line list.
pub fn load_list(path: &Path) -> Result<Vec<String>> {
    Ok(parse_entries(&read_to_string(path)?))
}
