//! Text normalization and tokenization shared by every text-facing module.
//!
//! A token is a maximal run of alphanumeric characters that contains at least
//! one letter. Everything else (whitespace, punctuation, digit-only runs) is a
//! separator or is dropped.

use alloc::string::String;
use alloc::vec::Vec;

use unicode_normalization::UnicodeNormalization;

/// NFC-normalizes and lower-cases `text`. Phrase matching compares the
/// output of this function on both sides.
pub fn normalize(text: &str) -> String {
    let nfc: String = text.nfc().collect();
    nfc.to_lowercase()
}

/// Splits `text` into word tokens, preserving case and order.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|run| !run.is_empty() && run.chars().any(char::is_alphabetic))
        .collect()
}

/// Case-insensitive substring test. `phrase_normalized` must already be the
/// output of [`normalize`].
pub fn contains_normalized(text: &str, phrase_normalized: &str) -> bool {
    !phrase_normalized.is_empty() && normalize(text).contains(phrase_normalized)
}

/// True when every letter of `token` is upper case and it has at least one.
pub fn is_all_caps(token: &str) -> bool {
    let mut saw_letter = false;
    for c in token.chars() {
        if c.is_alphabetic() {
            if !c.is_uppercase() {
                return false;
            }
            saw_letter = true;
        }
    }
    saw_letter
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_splits_on_non_alphanumeric_runs() {
        assert_eq!(tokenize("kill the lights"), ["kill", "the", "lights"]);
        assert_eq!(tokenize("  WOW!!! it's--real "), ["WOW", "it", "s", "real"]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("?!... 2024 !!").is_empty());
        assert_eq!(tokenize("covid19 42"), ["covid19"]);
    }

    #[test]
    fn caps_needs_a_letter() {
        assert!(is_all_caps("SHOCKING"));
        assert!(is_all_caps("COVID19"));
        assert!(!is_all_caps("Cats"));
        assert!(!is_all_caps("123"));
    }

    #[test]
    fn normalize_composes_and_lowercases() {
        // "e" + combining acute composes to U+00E9 under NFC.
        assert_eq!(normalize("Caf\u{0065}\u{0301}"), "caf\u{00e9}");
        assert!(contains_normalized("Looks ALMOST real", "looks almost real"));
        assert!(!contains_normalized("anything", ""));
    }
}
