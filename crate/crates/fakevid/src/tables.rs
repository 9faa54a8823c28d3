//! CSV files: feature tables, predictions, ground truth, evaluation reports,
//! PCA projections and agreement matrices.

use std::path::Path;

use fakevid_core::corpus::{AnnotationLabel, Label};
use fakevid_core::eval::{ClassMetrics, EvaluationReport};

use crate::error::{write_bytes, Error, Result};

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory CSV writer")
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    Error::parse(path, line, e.to_string())
}

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(path, format!("{other:?}")),
    })
}

fn parse_label(raw: &str, path: &Path, line: usize) -> Result<Label> {
    Label::parse(raw.trim()).ok_or_else(|| Error::parse(path, line, format!("unknown label `{raw}`")))
}

fn parse_f64(raw: &str, path: &Path, line: usize) -> Result<f64> {
    raw.trim()
        .parse()
        .map_err(|_| Error::parse(path, line, format!("bad number `{raw}`")))
}

/// Named feature columns per video.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    pub names: Vec<String>,
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<Label>,
}

impl FeatureTable {
    pub fn column_indices(&self, names: &[String]) -> Result<Vec<usize>> {
        names
            .iter()
            .map(|n| {
                self.names
                    .iter()
                    .position(|m| m == n)
                    .ok_or_else(|| Error::Data(format!("feature `{n}` is not in the feature table")))
            })
            .collect()
    }

    /// Rows restricted to the given columns, in that order.
    pub fn select(&self, columns: &[usize]) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| columns.iter().map(|&c| r[c]).collect()).collect()
    }

    pub fn subset(&self, keep: &[bool]) -> FeatureTable {
        let pick = |i: &usize| keep[*i];
        let idx: Vec<usize> = (0..self.ids.len()).filter(pick).collect();
        FeatureTable {
            names: self.names.clone(),
            ids: idx.iter().map(|&i| self.ids[i].clone()).collect(),
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: idx.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    pub fn row_of(&self, id: &str) -> Option<&[f64]> {
        self.ids.iter().position(|x| x == id).map(|i| self.rows[i].as_slice())
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = writer();
        let mut header = vec!["video_id".to_string()];
        header.extend(self.names.iter().cloned());
        header.push("label".into());
        w.write_record(&header).expect("in-memory CSV");
        for ((id, row), label) in self.ids.iter().zip(&self.rows).zip(&self.labels) {
            let mut rec = vec![id.clone()];
            rec.extend(row.iter().map(|v| v.to_string()));
            rec.push(label.as_str().to_string());
            w.write_record(&rec).expect("in-memory CSV");
        }
        finish(w)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_bytes(path, &self.to_csv())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = reader(path)?;
        let header: Vec<String> = r.headers().map_err(|e| csv_error(path, e))?.iter().map(String::from).collect();
        if header.len() < 3 || header[0] != "video_id" || header[header.len() - 1] != "label" {
            return Err(Error::format(path, "expected header `video_id,<features...>,label`"));
        }
        let names = header[1..header.len() - 1].to_vec();
        let mut t = FeatureTable {
            names,
            ids: Vec::new(),
            rows: Vec::new(),
            labels: Vec::new(),
        };
        for rec in r.records() {
            let rec = rec.map_err(|e| csv_error(path, e))?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let row = (1..rec.len() - 1)
                .map(|i| parse_f64(&rec[i], path, line))
                .collect::<Result<Vec<_>>>()?;
            t.ids.push(rec[0].to_string());
            t.rows.push(row);
            t.labels.push(parse_label(&rec[rec.len() - 1], path, line)?);
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredictionRow {
    pub video_id: String,
    pub label: Label,
    pub p_fake: f64,
}

pub fn predictions_csv(rows: &[PredictionRow]) -> Vec<u8> {
    let mut w = writer();
    w.write_record(["video_id", "label", "p_fake"]).expect("in-memory CSV");
    for r in rows {
        w.write_record([r.video_id.as_str(), r.label.as_str(), &r.p_fake.to_string()])
            .expect("in-memory CSV");
    }
    finish(w)
}

pub fn load_predictions(path: &Path) -> Result<Vec<PredictionRow>> {
    let mut r = reader(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 3 {
            return Err(Error::parse(path, line, "expected `video_id,label,p_fake`"));
        }
        out.push(PredictionRow {
            video_id: rec[0].to_string(),
            label: parse_label(&rec[1], path, line)?,
            p_fake: parse_f64(&rec[2], path, line)?,
        });
    }
    Ok(out)
}

pub fn truth_csv(rows: &[(String, Label)]) -> Vec<u8> {
    let mut w = writer();
    w.write_record(["video_id", "label"]).expect("in-memory CSV");
    for (id, l) in rows {
        w.write_record([id.as_str(), l.as_str()]).expect("in-memory CSV");
    }
    finish(w)
}

/// Reads `video_id,label` (extra columns are ignored, so prediction and
/// feature files also work as truth).
pub fn load_truth(path: &Path) -> Result<Vec<(String, Label)>> {
    let mut r = reader(path)?;
    let header: Vec<String> = r.headers().map_err(|e| csv_error(path, e))?.iter().map(String::from).collect();
    let id_col = header.iter().position(|h| h == "video_id");
    let label_col = header.iter().position(|h| h == "label");
    let (Some(id_col), Some(label_col)) = (id_col, label_col) else {
        return Err(Error::format(path, "expected `video_id` and `label` columns"));
    };
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        out.push((rec[id_col].to_string(), parse_label(&rec[label_col], path, line)?));
    }
    Ok(out)
}

fn metric_row(name: &str, p: f64, r: f64, f: f64, support: u64) -> [String; 5] {
    [name.to_string(), p.to_string(), r.to_string(), f.to_string(), support.to_string()]
}

pub fn report_csv(report: &EvaluationReport) -> Vec<u8> {
    let mut w = writer();
    w.write_record(["class", "precision", "recall", "f1", "support"]).expect("in-memory CSV");
    for (name, m) in [("fake", report.fake), ("real", report.real)] {
        w.write_record(metric_row(name, m.precision, m.recall, m.f1, m.support))
            .expect("in-memory CSV");
    }
    w.write_record(metric_row(
        "macro",
        report.macro_precision,
        report.macro_recall,
        report.macro_f1,
        report.confusion.total(),
    ))
    .expect("in-memory CSV");
    finish(w)
}

/// Parsed report rows: `(class, metrics)`, macro row included.
pub fn load_report(path: &Path) -> Result<Vec<(String, ClassMetrics)>> {
    let mut r = reader(path)?;
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 5 {
            return Err(Error::parse(path, line, "expected 5 columns"));
        }
        out.push((
            rec[0].to_string(),
            ClassMetrics {
                precision: parse_f64(&rec[1], path, line)?,
                recall: parse_f64(&rec[2], path, line)?,
                f1: parse_f64(&rec[3], path, line)?,
                support: rec[4]
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(path, line, "bad support"))?,
            },
        ));
    }
    Ok(out)
}

/// `video_id,pc1,...,pck,label`
pub fn projection_csv(ids: &[String], projected: &[Vec<f64>], labels: &[Label], k: usize) -> Vec<u8> {
    let mut w = writer();
    let mut header = vec!["video_id".to_string()];
    header.extend((1..=k).map(|i| format!("pc{i}")));
    header.push("label".into());
    w.write_record(&header).expect("in-memory CSV");
    for ((id, row), label) in ids.iter().zip(projected).zip(labels) {
        let mut rec = vec![id.clone()];
        rec.extend(row.iter().map(|v| v.to_string()));
        rec.push(label.as_str().to_string());
        w.write_record(&rec).expect("in-memory CSV");
    }
    finish(w)
}

/// Rows are round-1 labels, columns round-2 labels.
pub fn agreement_csv(m: &[[u64; 3]; 3]) -> Vec<u8> {
    let mut w = writer();
    let mut header = vec!["round1\\round2".to_string()];
    header.extend(AnnotationLabel::ALL.iter().map(|l| l.as_str().to_string()));
    w.write_record(&header).expect("in-memory CSV");
    for (label, row) in AnnotationLabel::ALL.iter().zip(m) {
        let mut rec = vec![label.as_str().to_string()];
        rec.extend(row.iter().map(u64::to_string));
        w.write_record(&rec).expect("in-memory CSV");
    }
    finish(w)
}
