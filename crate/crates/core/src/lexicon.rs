//! Word and phrase lists that drive the lexical features.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use regex_automata::meta::Regex;
use regex_automata::util::syntax;

use crate::error::{Error, Result};
use crate::text;

pub const DEFAULT_CLICKBAIT_PHRASES: &str = include_str!("../lexicons/clickbait_phrases.txt");
pub const DEFAULT_VIOLENT_WORDS: &str = include_str!("../lexicons/violent_words.txt");
pub const DEFAULT_SWEAR_WORDS: &str = include_str!("../lexicons/swear_words.txt");
pub const DEFAULT_FAKENESS_PATTERNS: &str = include_str!("../lexicons/fakeness_patterns.txt");
pub const DEFAULT_FAKENESS_PHRASES: &str = include_str!("../lexicons/fakeness_phrases.txt");
pub const DEFAULT_SEED_PHRASES: &str = include_str!("../lexicons/seed_phrases.txt");

/// Parses the one-entry-per-line lexicon format. Blank lines and lines whose
/// first non-blank character is `#` are skipped; entries are trimmed.
pub fn parse_entries(contents: &str) -> Vec<String> {
    contents
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(ToString::to_string)
        .collect()
}

#[derive(Debug, Clone)]
pub struct FakenessPattern {
    pub source: String,
    regex: Regex,
}

impl FakenessPattern {
    pub fn new(source: &str) -> Result<Self> {
        let regex = Regex::builder()
            .syntax(syntax::Config::new().case_insensitive(true))
            .build(source)
            .map_err(|e| Error::Pattern {
                pattern: source.to_string(),
                message: e.to_string(),
            })?;
        Ok(FakenessPattern {
            source: source.to_string(),
            regex,
        })
    }

    pub fn is_match(&self, text: &str) -> bool {
        self.regex.is_match(text)
    }
}

#[derive(Debug, Clone)]
pub struct LexiconSet {
    /// Normalized (NFC, lower-case) clickbait phrases.
    clickbait_phrases: Vec<String>,
    violent_words: BTreeSet<String>,
    fakeness_patterns: Vec<FakenessPattern>,
    swear_words: BTreeSet<String>,
}

fn nonempty(kind: &str, entries: &[String]) -> Result<()> {
    if entries.iter().any(|e| e.trim().is_empty()) {
        return Err(Error::invalid(alloc::format!("{kind} lexicon has an empty entry")));
    }
    Ok(())
}

impl LexiconSet {
    pub fn new(
        clickbait_phrases: &[String],
        violent_words: &[String],
        fakeness_patterns: &[String],
        swear_words: &[String],
    ) -> Result<Self> {
        nonempty("clickbait", clickbait_phrases)?;
        nonempty("violent-word", violent_words)?;
        nonempty("fakeness-pattern", fakeness_patterns)?;
        nonempty("swear-word", swear_words)?;
        let patterns = fakeness_patterns
            .iter()
            .map(|p| FakenessPattern::new(p.trim()))
            .collect::<Result<Vec<_>>>()?;
        let words = |list: &[String]| list.iter().map(|w| text::normalize(w.trim())).collect();
        Ok(LexiconSet {
            clickbait_phrases: clickbait_phrases
                .iter()
                .map(|p| text::normalize(p.trim()))
                .collect(),
            violent_words: words(violent_words),
            fakeness_patterns: patterns,
            swear_words: words(swear_words),
        })
    }

    /// The lexicons bundled with the crate.
    pub fn builtin() -> Self {
        LexiconSet::new(
            &parse_entries(DEFAULT_CLICKBAIT_PHRASES),
            &parse_entries(DEFAULT_VIOLENT_WORDS),
            &parse_entries(DEFAULT_FAKENESS_PATTERNS),
            &parse_entries(DEFAULT_SWEAR_WORDS),
        )
        .expect("bundled lexicons are valid")
    }

    pub fn clickbait_phrases(&self) -> &[String] {
        &self.clickbait_phrases
    }

    pub fn is_violent(&self, token: &str) -> bool {
        self.violent_words.contains(&text::normalize(token))
    }

    pub fn is_swear(&self, token: &str) -> bool {
        self.swear_words.contains(&text::normalize(token))
    }

    pub fn fakeness_patterns(&self) -> &[FakenessPattern] {
        &self.fakeness_patterns
    }
}

/// The ordered fakeness-indicator phrases that define the comment fakeness
/// vector. Order matters: entry `i` of every vector refers to phrase `i`.
pub fn builtin_fakeness_phrases() -> Vec<String> {
    parse_entries(DEFAULT_FAKENESS_PHRASES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_sizes() {
        assert_eq!(parse_entries(DEFAULT_CLICKBAIT_PHRASES).len(), 70);
        assert_eq!(builtin_fakeness_phrases().len(), 30);
        let lex = LexiconSet::builtin();
        assert_eq!(lex.clickbait_phrases().len(), 70);
        assert!(lex.is_violent("KILL"));
        assert!(lex.is_swear("Crap"));
    }

    #[test]
    fn parse_skips_comments_and_blanks() {
        let e = parse_entries("# header\n\n  fake  \n  # indented comment\nhoax\n");
        assert_eq!(e, ["fake", "hoax"]);
    }

    #[test]
    fn bad_pattern_is_reported() {
        let err = LexiconSet::new(&[], &[], &["fa(ke".into()], &[]).unwrap_err();
        assert!(matches!(err, Error::Pattern { ref pattern, .. } if pattern == "fa(ke"));
    }

    #[test]
    fn empty_entry_rejected() {
        assert!(LexiconSet::new(&["  ".into()], &[], &[], &[]).is_err());
    }

    #[test]
    fn patterns_are_case_insensitive() {
        let p = FakenessPattern::new("fa+ke+").unwrap();
        assert!(p.is_match("FAAAKE!!"));
        assert!(!p.is_match("nice video"));
    }
}
