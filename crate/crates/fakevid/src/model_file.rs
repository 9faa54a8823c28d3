//! Versioned flat model documents.
//!
//! ```text
//! fakevid-model 1
//! kind ucnet
//! meta hidden_dim 300
//! tensor lstm.w_input 1200 16
//! <row-major values, one row per line>
//! end
//! ```
//!
//! Values are written with 17 significant digits, so reading a document
//! back reproduces every parameter exactly.

use std::fmt::Write as _;
use std::path::Path;

use fakevid_core::nn::Parameterized;

use crate::error::{read_to_string, write_bytes, Error, Result};

pub const MAGIC: &str = "fakevid-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct StoredTensor {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelDocument {
    pub kind: String,
    /// Ordered key/value pairs; a key may repeat.
    pub meta: Vec<(String, String)>,
    pub tensors: Vec<StoredTensor>,
}

impl ModelDocument {
    pub fn new(kind: &str) -> Self {
        ModelDocument {
            kind: kind.to_string(),
            meta: Vec::new(),
            tensors: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push_tensor(&mut self, name: &str, shape: Vec<usize>, data: Vec<f64>) {
        self.tensors.push(StoredTensor {
            name: name.to_string(),
            shape,
            data,
        });
    }

    /// Adds every tensor of `params` under `prefix`.
    pub fn push_params<P: Parameterized>(&mut self, prefix: &str, params: &P) {
        for t in params.tensors() {
            self.push_tensor(&format!("{prefix}{}", t.name), t.shape, t.data.to_vec());
        }
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn meta_all(&self, key: &str) -> Vec<&str> {
        self.meta.iter().filter(|(k, _)| k == key).map(|(_, v)| v.as_str()).collect()
    }

    pub fn tensor(&self, name: &str) -> Option<&StoredTensor> {
        self.tensors.iter().find(|t| t.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = format!("{MAGIC} {FORMAT_VERSION}\nkind {}\n", self.kind);
        for (k, v) in &self.meta {
            writeln!(out, "meta {k} {v}").expect("writing to a String");
        }
        for t in &self.tensors {
            out.push_str("tensor ");
            out.push_str(&t.name);
            for d in &t.shape {
                write!(out, " {d}").expect("writing to a String");
            }
            out.push('\n');
            let row = t.shape.last().copied().unwrap_or(1).max(1);
            for chunk in t.data.chunks(row) {
                let line: Vec<String> = chunk.iter().map(|x| format!("{x:.16e}")).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let header = lines.next().map(|(_, l)| l).unwrap_or_default();
        let version = header
            .strip_prefix(MAGIC)
            .map(str::trim)
            .ok_or_else(|| Error::format(path, "not a model document"))?;
        if version != FORMAT_VERSION.to_string() {
            return Err(Error::format(path, format!("unsupported model format version `{version}`")));
        }
        let kind = match lines.next() {
            Some((_, l)) if l.starts_with("kind ") => l["kind ".len()..].trim().to_string(),
            Some((n, _)) => return Err(Error::parse(path, n, "expected `kind <name>`")),
            None => return Err(Error::format(path, "truncated model document")),
        };
        let mut doc = ModelDocument::new(&kind);
        let mut pending: Option<(StoredTensor, usize)> = None;
        let mut ended = false;
        for (n, line) in lines.by_ref() {
            if let Some((t, expected)) = pending.as_mut() {
                for v in line.split_whitespace() {
                    let x: f64 = v.parse().map_err(|_| Error::parse(path, n, format!("bad value `{v}`")))?;
                    t.data.push(x);
                }
                if t.data.len() > *expected {
                    return Err(Error::parse(path, n, format!("tensor `{}` has too many values", t.name)));
                }
                if t.data.len() == *expected {
                    doc.tensors.push(pending.take().expect("pending tensor").0);
                }
                continue;
            }
            if line == "end" {
                ended = true;
                break;
            }
            let (word, rest) = line.split_once(' ').unwrap_or((line, ""));
            match word {
                "meta" => {
                    let (k, v) = rest.split_once(' ').unwrap_or((rest, ""));
                    if k.is_empty() {
                        return Err(Error::parse(path, n, "empty meta key"));
                    }
                    doc.push_meta(k, v);
                }
                "tensor" => {
                    let mut parts = rest.split_whitespace();
                    let name = parts.next().ok_or_else(|| Error::parse(path, n, "tensor without a name"))?;
                    let shape = parts
                        .map(str::parse::<usize>)
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| Error::parse(path, n, "bad tensor shape"))?;
                    let expected: usize = shape.iter().product();
                    let t = StoredTensor {
                        name: name.to_string(),
                        shape,
                        data: Vec::with_capacity(expected),
                    };
                    if expected == 0 {
                        doc.tensors.push(t);
                    } else {
                        pending = Some((t, expected));
                    }
                }
                _ => return Err(Error::parse(path, n, format!("unexpected line `{line}`"))),
            }
        }
        if let Some((t, _)) = pending {
            return Err(Error::format(path, format!("tensor `{}` is truncated", t.name)));
        }
        if !ended {
            return Err(Error::format(path, "missing `end` line"));
        }
        Ok(doc)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?, path)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_bytes(path, self.render().as_bytes())
    }

    /// Typed meta lookup.
    pub fn meta_parse<T: std::str::FromStr>(&self, key: &str, path: &Path) -> Result<T> {
        let raw = self
            .meta(key)
            .ok_or_else(|| Error::format(path, format!("missing meta `{key}`")))?;
        raw.trim()
            .parse()
            .map_err(|_| Error::format(path, format!("bad value `{raw}` for meta `{key}`")))
    }

    pub fn expect_kind(&self, kind: &str, path: &Path) -> Result<()> {
        if self.kind != kind {
            return Err(Error::format(path, format!("expected a `{kind}` model, found `{}`", self.kind)));
        }
        Ok(())
    }

    pub fn tensor_data(&self, name: &str, shape: &[usize], path: &Path) -> Result<&[f64]> {
        let t = self
            .tensor(name)
            .ok_or_else(|| Error::format(path, format!("missing tensor `{name}`")))?;
        if t.shape != shape {
            return Err(Error::format(
                path,
                format!("tensor `{name}` has shape {:?}, expected {shape:?}", t.shape),
            ));
        }
        Ok(&t.data)
    }

    /// Copies stored tensors named `prefix + name` into `params`, checking
    /// every shape.
    pub fn fill_params<P: Parameterized>(&self, prefix: &str, params: &mut P, path: &Path) -> Result<()> {
        let wanted: Vec<(String, Vec<usize>)> = params
            .tensors()
            .into_iter()
            .map(|t| (format!("{prefix}{}", t.name), t.shape))
            .collect();
        for ((name, shape), buf) in wanted.iter().zip(params.tensors_mut()) {
            let data = self.tensor_data(name, shape, path)?;
            if data.iter().any(|x| !x.is_finite()) {
                return Err(Error::format(path, format!("tensor `{name}` has non-finite values")));
            }
            buf.copy_from_slice(data);
        }
        Ok(())
    }
}
