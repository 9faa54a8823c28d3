//! Line-delimited JSON dataset files and tab-separated annotation rounds.

use std::path::Path;

use fakevid_core::corpus::{AnnotationLabel, AnnotationRound, Comment, Dataset, Label, VideoRecord};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{read_to_string, write_bytes, Error, Result};

#[derive(Serialize, Deserialize)]
struct CommentDoc {
    id: String,
    text: String,
    like_count: u64,
    reply_count: u64,
    published_at: String,
    #[serde(flatten, skip_serializing)]
    extra: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct RecordDoc {
    id: String,
    title: String,
    description: String,
    tags: Vec<String>,
    view_count: u64,
    like_count: u64,
    dislike_count: u64,
    channel_subscriber_count: u64,
    comments: Vec<CommentDoc>,
    label: String,
    #[serde(flatten, skip_serializing)]
    extra: Map<String, Value>,
}

fn warn_unknown(path: &Path, line: usize, what: &str, extra: &Map<String, Value>) {
    for key in extra.keys() {
        log::warn!("{}:{line}: ignoring unknown {what} key `{key}`", path.display());
    }
}

fn to_record(doc: RecordDoc, path: &Path, line: usize) -> Result<VideoRecord> {
    warn_unknown(path, line, "record", &doc.extra);
    if doc.id.is_empty() {
        return Err(Error::parse(path, line, "empty video id"));
    }
    let label = Label::parse(&doc.label)
        .ok_or_else(|| Error::parse(path, line, format!("unknown label `{}`", doc.label)))?;
    let comments = doc
        .comments
        .into_iter()
        .map(|c| {
            warn_unknown(path, line, "comment", &c.extra);
            Comment {
                id: c.id,
                text: c.text,
                like_count: c.like_count,
                reply_count: c.reply_count,
                published_at: c.published_at,
            }
        })
        .collect();
    Ok(VideoRecord {
        id: doc.id,
        title: doc.title,
        description: doc.description,
        tags: doc.tags,
        view_count: doc.view_count,
        like_count: doc.like_count,
        dislike_count: doc.dislike_count,
        channel_subscriber_count: doc.channel_subscriber_count,
        comments,
        label,
    })
}

/// Parses dataset text; `path` is only used in error messages. Blank lines
/// are skipped.
pub fn parse_dataset(text: &str, name: &str, path: &Path) -> Result<Dataset> {
    let mut records = Vec::new();
    let mut first_line = std::collections::HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let doc: RecordDoc = serde_json::from_str(raw).map_err(|e| Error::parse(path, line, e.to_string()))?;
        let record = to_record(doc, path, line)?;
        if let Some(prev) = first_line.insert(record.id.clone(), line) {
            return Err(Error::parse(
                path,
                line,
                format!("duplicate video id `{}` (first seen on line {prev})", record.id),
            ));
        }
        records.push(record);
    }
    Ok(Dataset::new(name, records)?)
}

pub fn load_dataset(path: &Path, name: &str) -> Result<Dataset> {
    parse_dataset(&read_to_string(path)?, name, path)
}

/// Dataset name derived from the file stem.
pub fn load_dataset_named_by_file(path: &Path) -> Result<Dataset> {
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    load_dataset(path, name)
}

pub fn dataset_to_string(d: &Dataset) -> String {
    let mut out = String::new();
    for r in d.records() {
        let doc = RecordDoc {
            id: r.id.clone(),
            title: r.title.clone(),
            description: r.description.clone(),
            tags: r.tags.clone(),
            view_count: r.view_count,
            like_count: r.like_count,
            dislike_count: r.dislike_count,
            channel_subscriber_count: r.channel_subscriber_count,
            comments: r
                .comments
                .iter()
                .map(|c| CommentDoc {
                    id: c.id.clone(),
                    text: c.text.clone(),
                    like_count: c.like_count,
                    reply_count: c.reply_count,
                    published_at: c.published_at.clone(),
                    extra: Map::new(),
                })
                .collect(),
            label: r.label.as_str().to_string(),
            extra: Map::new(),
        };
        out.push_str(&serde_json::to_string(&doc).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn write_dataset(path: &Path, d: &Dataset) -> Result<()> {
    write_bytes(path, dataset_to_string(d).as_bytes())
}

/// Reads `video_id<TAB>label` lines; blank lines are skipped.
pub fn load_annotation_round(path: &Path) -> Result<AnnotationRound> {
    let text = read_to_string(path)?;
    let mut round = AnnotationRound::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let (id, label) = raw
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, line, "expected `video_id<TAB>label`"))?;
        let label = AnnotationLabel::parse(label.trim())
            .ok_or_else(|| Error::parse(path, line, format!("unknown annotation label `{}`", label.trim())))?;
        if round.insert(id.to_string(), label).is_some() {
            return Err(Error::parse(path, line, format!("video `{id}` annotated twice")));
        }
    }
    Ok(round)
}

/// Reads labeled titles as `label<TAB>title` lines.
pub fn load_titles(path: &Path) -> Result<Vec<(String, Label)>> {
    let text = read_to_string(path)?;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let (label, title) = raw
            .split_once('\t')
            .ok_or_else(|| Error::parse(path, i + 1, "expected `label<TAB>title`"))?;
        let label = Label::parse(label.trim())
            .ok_or_else(|| Error::parse(path, i + 1, format!("unknown label `{}`", label.trim())))?;
        out.push((title.to_string(), label));
    }
    Ok(out)
}

pub fn titles_to_string(titles: &[(String, Label)]) -> String {
    titles
        .iter()
        .map(|(t, l)| format!("{}\t{}\n", l.as_str(), t.replace(['\t', '\n'], " ")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use fakevid_core::synthetic::tiny_corpus;

    const LINE: &str = r#"{"id":"a","title":"t","description":"","tags":[],"view_count":1,"like_count":2,"dislike_count":3,"channel_subscriber_count":4,"comments":[{"id":"c","text":"hi","like_count":0,"reply_count":1,"published_at":"2017-01-01T00:00:00Z"}],"label":"fake"}"#;

    #[test]
    fn empty_file_is_empty_dataset() {
        assert!(parse_dataset("", "x", Path::new("x")).unwrap().is_empty());
    }

    #[test]
    fn two_lines_keep_order() {
        let text = format!("{LINE}\n{}\n", LINE.replace("\"id\":\"a\"", "\"id\":\"b\""));
        let d = parse_dataset(&text, "x", Path::new("x")).unwrap();
        let ids: Vec<&str> = d.records().iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["a", "b"]);
        assert_eq!(d.records()[0].comments[0].reply_count, 1);
    }

    #[test]
    fn duplicate_id_names_the_id_and_line() {
        let other = LINE.replace("\"id\":\"a\"", "\"id\":\"x\"");
        let dup = LINE.replace("\"id\":\"a\"", "\"id\":\"abc\"");
        let text = [other.as_str(), other.replace("\"x\"", "\"y\"").as_str(), &dup, LINE, LINE.replace("\"a\"", "\"z\"").as_str(), LINE.replace("\"a\"", "\"w\"").as_str(), &dup].join("\n");
        let err = parse_dataset(&text, "x", Path::new("d.jsonl")).unwrap_err().to_string();
        assert!(err.contains("abc") && err.contains("d.jsonl:7") && err.contains("line 3"), "{err}");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let text = format!("{LINE}\n{{not json\n");
        let err = parse_dataset(&text, "x", Path::new("d.jsonl")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn missing_key_and_bad_label_are_errors() {
        assert!(parse_dataset(&LINE.replace("\"title\":\"t\",", ""), "x", Path::new("x")).is_err());
        assert!(parse_dataset(&LINE.replace("\"fake\"", "\"spam\""), "x", Path::new("x")).is_err());
        assert!(parse_dataset(&LINE.replace("\"view_count\":1", "\"view_count\":-1"), "x", Path::new("x")).is_err());
    }

    #[test]
    fn unknown_keys_are_ignored() {
        let text = LINE.replace("\"label\"", "\"extra\":5,\"label\"");
        assert_eq!(parse_dataset(&text, "x", Path::new("x")).unwrap().len(), 1);
    }

    #[test]
    fn write_then_read_round_trips() {
        let (d, _) = tiny_corpus();
        let back = parse_dataset(&dataset_to_string(&d), d.name(), Path::new("x")).unwrap();
        assert_eq!(back, d);
    }
}
