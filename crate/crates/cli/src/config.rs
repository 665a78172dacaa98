//! Run configuration: TOML on disk, validated into [`RunConfig`].
//!
//! Relative paths are resolved against the directory holding the config
//! file. Validation errors name the offending field, e.g.
//! `embeddings[1].path`.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use belief_axes::axes::Measure;
use belief_axes::embedding::FormatHint;
use belief_axes::evaluation::RegressionConfig;
use belief_axes::numerics::DEFAULT_RIDGE;
use belief_axes::survey::{SchemaConfig, SurveySchema};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    embeddings: Vec<RawEmbedding>,
    #[serde(default)]
    dimensions: Vec<PathBuf>,
    #[serde(default)]
    surveys: Vec<RawSurvey>,
    identities: Option<PathBuf>,
    labeling: Option<PathBuf>,
    salience_survey: Option<String>,
    evaluation_report: Option<PathBuf>,
    measures: Option<Vec<String>>,
    sign_align: Option<bool>,
    ridge: Option<f64>,
    bootstrap_resamples: Option<usize>,
    bootstrap_level: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEmbedding {
    name: String,
    path: PathBuf,
    format: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurvey {
    name: String,
    path: PathBuf,
    schema: String,
    native_range: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct EmbeddingSource {
    pub name: String,
    pub path: PathBuf,
    pub format: FormatHint,
}

#[derive(Debug, Clone)]
pub struct SurveySource {
    pub name: String,
    pub path: PathBuf,
    pub schema: SchemaConfig,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub output_dir: PathBuf,
    pub embeddings: Vec<EmbeddingSource>,
    pub dimensions: Vec<PathBuf>,
    pub surveys: Vec<SurveySource>,
    pub identities: Option<PathBuf>,
    pub labeling: Option<PathBuf>,
    pub salience_survey: Option<String>,
    pub evaluation_report: Option<PathBuf>,
    pub measures: Vec<Measure>,
    pub sign_align: bool,
    pub ridge: f64,
    pub bootstrap_resamples: usize,
    pub bootstrap_level: f64,
    /// Hex SHA-256 of the config file text.
    pub config_hash: String,
}

/// Command-line settings that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub no_sign_align: bool,
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.into(),
        message: message.into(),
    }
}

fn existing(base: &Path, path: &Path, field: String) -> Result<PathBuf> {
    let full = base.join(path);
    if !full.exists() {
        return Err(invalid(field, format!("file not found: {}", full.display())));
    }
    Ok(full)
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| invalid("--config", format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map(|span| text[..span.start].matches('\n').count() + 1);
            match line {
                Some(line) => {
                    let source = text.lines().nth(line - 1).unwrap_or("").trim();
                    invalid("config", format!("{} (line {line}: `{source}`)", e.message()))
                }
                None => invalid("config", e.message()),
            }
        })?;

        let mut embeddings = Vec::new();
        let mut names = BTreeSet::new();
        for (i, e) in raw.embeddings.iter().enumerate() {
            let field = |f: &str| format!("embeddings[{i}].{f}");
            if e.name.trim().is_empty() {
                return Err(invalid(field("name"), "must not be empty"));
            }
            if !names.insert(e.name.clone()) {
                return Err(invalid(field("name"), format!("duplicate embedding name {:?}", e.name)));
            }
            let format = match &e.format {
                Some(f) => f.parse().map_err(|_| {
                    invalid(field("format"), format!("unknown format {f:?}; use word2vec-text, glove-text or auto"))
                })?,
                None => FormatHint::Auto,
            };
            embeddings.push(EmbeddingSource {
                name: e.name.clone(),
                path: existing(base, &e.path, field("path"))?,
                format,
            });
        }

        let dimensions = raw
            .dimensions
            .iter()
            .enumerate()
            .map(|(i, p)| existing(base, p, format!("dimensions[{i}]")))
            .collect::<Result<Vec<_>>>()?;

        let mut surveys = Vec::new();
        let mut names = BTreeSet::new();
        for (i, s) in raw.surveys.iter().enumerate() {
            let field = |f: &str| format!("surveys[{i}].{f}");
            if s.name.trim().is_empty() {
                return Err(invalid(field("name"), "must not be empty"));
            }
            if !names.insert(s.name.clone()) {
                return Err(invalid(field("name"), format!("duplicate survey name {:?}", s.name)));
            }
            let schema: SurveySchema = s.schema.parse().map_err(|_| {
                invalid(
                    field("schema"),
                    format!("unknown schema {:?}; use this-paper, bolukbasi, personality-traits or epa-dictionary", s.schema),
                )
            })?;
            let mut schema = SchemaConfig::from(schema);
            if let Some((lo, hi)) = s.native_range {
                if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                    return Err(invalid(field("native_range"), format!("[{lo}, {hi}] is not an increasing range")));
                }
                schema.native_range = (lo, hi);
            }
            surveys.push(SurveySource {
                name: s.name.clone(),
                path: existing(base, &s.path, field("path"))?,
                schema,
            });
        }

        if let Some(name) = &raw.salience_survey {
            if !surveys.iter().any(|s| &s.name == name) {
                return Err(invalid("salience_survey", format!("no survey named {name:?}")));
            }
        }

        let measures = match &raw.measures {
            None => Measure::ALL.to_vec(),
            Some(list) => {
                let mut out: Vec<Measure> = Vec::new();
                for (i, m) in list.iter().enumerate() {
                    let parsed: Measure = m.parse().map_err(|_| {
                        let known: Vec<&str> = Measure::ALL.iter().map(|m| m.id()).collect();
                        invalid(format!("measures[{i}]"), format!("unknown measure {m:?}; known: {}", known.join(", ")))
                    })?;
                    if !out.contains(&parsed) {
                        out.push(parsed);
                    }
                }
                if out.is_empty() {
                    return Err(invalid("measures", "must list at least one measure"));
                }
                out
            }
        };

        let ridge = raw.ridge.unwrap_or(DEFAULT_RIDGE);
        if !(ridge.is_finite() && ridge >= 0.0) {
            return Err(invalid("ridge", format!("must be a nonnegative number, got {ridge}")));
        }
        let bootstrap_resamples = raw.bootstrap_resamples.unwrap_or(1000);
        if bootstrap_resamples != 0 && bootstrap_resamples < 100 {
            return Err(invalid("bootstrap_resamples", "must be 0 (disabled) or at least 100"));
        }
        let bootstrap_level = raw.bootstrap_level.unwrap_or(0.95);
        if !(bootstrap_level > 0.0 && bootstrap_level < 1.0) {
            return Err(invalid("bootstrap_level", format!("must lie in (0, 1), got {bootstrap_level}")));
        }

        Ok(RunConfig {
            seed: raw.seed.unwrap_or(0),
            output_dir: base.join(raw.output_dir.unwrap_or_else(|| PathBuf::from("out"))),
            embeddings,
            dimensions,
            surveys,
            identities: raw.identities.map(|p| existing(base, &p, "identities".into())).transpose()?,
            labeling: raw.labeling.map(|p| existing(base, &p, "labeling".into())).transpose()?,
            salience_survey: raw.salience_survey,
            evaluation_report: raw
                .evaluation_report
                .map(|p| existing(base, &p, "evaluation_report".into()))
                .transpose()?,
            measures,
            sign_align: raw.sign_align.unwrap_or(true),
            ridge,
            bootstrap_resamples,
            bootstrap_level,
            config_hash: Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect(),
        })
    }

    pub fn apply(mut self, overrides: &Overrides) -> Self {
        if let Some(seed) = overrides.seed {
            self.seed = seed;
        }
        if let Some(dir) = &overrides.output_dir {
            self.output_dir = dir.clone();
        }
        if overrides.no_sign_align {
            self.sign_align = false;
        }
        self
    }

    pub fn regression(&self) -> RegressionConfig {
        RegressionConfig {
            ridge: self.ridge,
            resamples: self.bootstrap_resamples,
            level: self.bootstrap_level,
            seed: self.seed,
        }
    }

    pub(crate) fn require_embeddings(&self) -> Result<()> {
        if self.embeddings.is_empty() {
            return Err(invalid("embeddings", "at least one embedding is required"));
        }
        if self.dimensions.is_empty() {
            return Err(invalid("dimensions", "at least one dimension file is required"));
        }
        Ok(())
    }

    pub(crate) fn require_surveys(&self) -> Result<()> {
        if self.surveys.is_empty() {
            return Err(invalid("surveys", "at least one survey is required"));
        }
        Ok(())
    }

    pub(crate) fn require_labeling(&self) -> Result<&Path> {
        self.require_surveys()?;
        self.labeling
            .as_deref()
            .ok_or_else(|| invalid("labeling", "a labeling file is required for salience"))
    }

    /// Survey used for the salience analysis: the configured one, else the
    /// first listed.
    pub(crate) fn salience_survey_name(&self) -> Option<&str> {
        self.salience_survey
            .as_deref()
            .or_else(|| self.surveys.first().map(|s| s.name.as_str()))
    }
}
