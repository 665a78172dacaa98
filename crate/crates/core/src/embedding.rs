//! Loading and querying text-format word embeddings.
//!
//! Two whitespace-separated layouts are understood: word2vec text files,
//! which open with a `<count> <dim>` header line, and GloVe files, which
//! start directly with data. All values are held as `f64`.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatHint {
    Word2vecText,
    GloveText,
    #[default]
    Auto,
}

impl std::str::FromStr for FormatHint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word2vec-text" => Ok(FormatHint::Word2vecText),
            "glove-text" => Ok(FormatHint::GloveText),
            "auto" => Ok(FormatHint::Auto),
            other => Err(Error::InvalidInput(format!("unknown embedding format {other:?}"))),
        }
    }
}

/// Immutable vocabulary-to-vector matrix for one corpus/algorithm pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingModel {
    name: String,
    dim: usize,
    words: Vec<String>,
    vocab: HashMap<String, usize>,
    // row-major, words.len() * dim
    data: Vec<f64>,
    normalized: bool,
    duplicates: Vec<String>,
}

/// How a query word was matched against the vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Resolution {
    Exact,
    Casefold,
    Underscore,
}

/// A resolved row of the embedding matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordVector<'a> {
    pub word: &'a str,
    pub values: &'a [f64],
    pub resolution: Resolution,
}

/// A word that could not be scored, kept for the run manifest.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SkippedWord {
    pub word: String,
    pub reason: String,
}

impl SkippedWord {
    pub fn oov(word: &str) -> Self {
        SkippedWord {
            word: word.to_owned(),
            reason: "out-of-vocabulary after exact, casefold and underscore lookups".to_owned(),
        }
    }
}

impl EmbeddingModel {
    /// Builds a model from `(word, vector)` rows. Later duplicates are dropped.
    pub fn from_rows<I, S>(name: impl Into<String>, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut builder: Option<Builder> = None;
        for (word, values) in rows {
            let word = word.into();
            let b = builder.get_or_insert_with(|| Builder::new(values.len()));
            if values.len() != b.dim {
                return Err(Error::DimensionMismatch {
                    word,
                    expected: b.dim,
                    found: values.len(),
                });
            }
            if let Some(v) = values.iter().find(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    source_name: word,
                    line: 0,
                    token: v.to_string(),
                });
            }
            b.push(word, &values);
        }
        let name = name.into();
        match builder {
            Some(b) if b.dim > 0 => Ok(b.finish(name)),
            _ => Err(Error::EmptyEmbeddings { source_name: name }),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Words that appeared more than once in the source; the first row was kept.
    pub fn duplicates(&self) -> &[String] {
        &self.duplicates
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.data[index * self.dim..(index + 1) * self.dim]
    }

    /// Exact match, then a casefolded retry, then a space-to-underscore retry.
    pub fn lookup(&self, word: &str) -> Option<WordVector<'_>> {
        let attempts = [
            (Some(word.to_owned()), Resolution::Exact),
            (Some(word.to_lowercase()), Resolution::Casefold),
            (
                word.contains(' ').then(|| word.replace(' ', "_")),
                Resolution::Underscore,
            ),
        ];
        attempts.into_iter().find_map(|(candidate, resolution)| {
            let idx = *self.vocab.get(candidate.as_deref()?)?;
            Some(WordVector {
                word: &self.words[idx],
                values: self.row(idx),
                resolution,
            })
        })
    }

    /// Returns a copy with every row scaled to unit Euclidean norm.
    pub fn unit_normalize(&self) -> Result<EmbeddingModel> {
        let mut data = self.data.clone();
        for (i, row) in data.chunks_exact_mut(self.dim).enumerate() {
            let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                return Err(Error::ZeroNorm {
                    word: self.words[i].clone(),
                });
            }
            row.iter_mut().for_each(|v| *v /= norm);
        }
        Ok(EmbeddingModel {
            data,
            normalized: true,
            ..self.clone()
        })
    }

    /// Writes the model as text. Values use the shortest representation that
    /// parses back to the same `f64`.
    pub fn write_text<W: Write>(&self, mut out: W, format: FormatHint) -> std::io::Result<()> {
        if format == FormatHint::Word2vecText {
            writeln!(out, "{} {}", self.len(), self.dim)?;
        }
        for (i, word) in self.words.iter().enumerate() {
            write!(out, "{word}")?;
            for v in self.row(i) {
                write!(out, " {v}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

struct Builder {
    dim: usize,
    words: Vec<String>,
    vocab: HashMap<String, usize>,
    data: Vec<f64>,
    duplicates: Vec<String>,
}

impl Builder {
    fn new(dim: usize) -> Self {
        Builder {
            dim,
            words: Vec::new(),
            vocab: HashMap::new(),
            data: Vec::new(),
            duplicates: Vec::new(),
        }
    }

    fn push(&mut self, word: String, values: &[f64]) {
        if self.vocab.contains_key(&word) {
            self.duplicates.push(word);
            return;
        }
        self.vocab.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.data.extend_from_slice(values);
    }

    fn finish(self, name: String) -> EmbeddingModel {
        for dup in &self.duplicates {
            warn!("{name}: duplicate word {dup:?}, keeping first occurrence");
        }
        EmbeddingModel {
            name,
            dim: self.dim,
            words: self.words,
            vocab: self.vocab,
            data: self.data,
            normalized: false,
            duplicates: self.duplicates,
        }
    }
}

/// Loads a text embedding file. The model is named after the file stem.
pub fn load_embeddings(path: impl AsRef<Path>, format: FormatHint) -> Result<EmbeddingModel> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    read_embeddings(&name, BufReader::new(file), format).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

fn is_header(tokens: &[&str]) -> bool {
    tokens.len() == 2 && tokens.iter().all(|t| t.parse::<u64>().is_ok())
}

/// Parses embeddings from any buffered reader; `name` is used in messages
/// and as the model name.
pub fn read_embeddings<R: BufRead>(name: &str, reader: R, format: FormatHint) -> Result<EmbeddingModel> {
    let mut builder: Option<Builder> = None;
    let mut header_dim: Option<usize> = None;
    let mut values = Vec::new();
    let mut seen_first = false;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::io(name, e))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if !seen_first {
            seen_first = true;
            let header = match format {
                FormatHint::Word2vecText => {
                    if !is_header(&tokens) {
                        return Err(Error::MalformedRow {
                            source_name: name.to_owned(),
                            line: line_no,
                            message: "expected a `<count> <dim>` word2vec header".to_owned(),
                        });
                    }
                    true
                }
                FormatHint::GloveText => false,
                FormatHint::Auto => is_header(&tokens),
            };
            if header {
                header_dim = Some(tokens[1].parse().expect("checked by is_header"));
                continue;
            }
        }

        let b = builder.get_or_insert_with(|| Builder::new(header_dim.unwrap_or(tokens.len() - 1)));
        if tokens.len() != b.dim + 1 {
            return Err(Error::InconsistentColumns {
                source_name: name.to_owned(),
                line: line_no,
                expected: b.dim + 1,
                found: tokens.len(),
            });
        }
        values.clear();
        for tok in &tokens[1..] {
            let v: f64 = tok.parse().map_err(|_| Error::NonNumeric {
                source_name: name.to_owned(),
                line: line_no,
                token: (*tok).to_owned(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    source_name: name.to_owned(),
                    line: line_no,
                    token: (*tok).to_owned(),
                });
            }
            values.push(v);
        }
        b.push(tokens[0].to_owned(), &values);
    }

    match builder {
        Some(b) if b.dim > 0 => Ok(b.finish(name.to_owned())),
        _ => Err(Error::EmptyEmbeddings {
            source_name: name.to_owned(),
        }),
    }
}
