use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pole {
    Left,
    Right,
}

/// Where a dimension's word sets came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WordsetSource {
    SurveyMatched,
    SurveyAugmented,
    PriorWork,
}

impl WordsetSource {
    pub fn as_str(self) -> &'static str {
        match self {
            WordsetSource::SurveyMatched => "survey-matched",
            WordsetSource::SurveyAugmented => "survey-augmented",
            WordsetSource::PriorWork => "prior-work",
        }
    }
}

impl fmt::Display for WordsetSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Category {
    pub name: String,
    /// Survey dimension this category is scored against; defaults to `name`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<String>,
    pub words: Vec<String>,
}

impl Category {
    pub fn dimension(&self) -> &str {
        self.dimension.as_deref().unwrap_or(&self.name)
    }
}

/// Categories of a dimension with more than two values (race, institutions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MulticlassSpec {
    pub categories: Vec<Category>,
    /// Category every other one is paired against under pair-based measures.
    pub default: String,
    /// Category the default itself is paired against.
    pub contrast: String,
}

impl MulticlassSpec {
    pub fn category(&self, name: &str) -> Option<&Category> {
        self.categories.iter().find(|c| c.name == name)
    }
}

/// A named dimension of social meaning plus its pole-defining word sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionSpec {
    pub name: String,
    #[serde(rename = "wordset")]
    pub source: WordsetSource,
    #[serde(default, rename = "left")]
    pub left_words: Vec<String>,
    #[serde(default, rename = "right")]
    pub right_words: Vec<String>,
    #[serde(default, rename = "pairs", skip_serializing_if = "Option::is_none")]
    pub paired: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiclass: Option<MulticlassSpec>,
    #[serde(default = "default_high_pole")]
    pub high_pole: Pole,
    /// Human-readable contrast, e.g. `hispanic-vs-white`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn default_high_pole() -> Pole {
    Pole::Right
}

impl DimensionSpec {
    pub fn binary(
        name: impl Into<String>,
        source: WordsetSource,
        left: &[&str],
        right: &[&str],
    ) -> Self {
        DimensionSpec {
            name: name.into(),
            source,
            left_words: left.iter().map(|s| s.to_string()).collect(),
            right_words: right.iter().map(|s| s.to_string()).collect(),
            paired: None,
            multiclass: None,
            high_pole: Pole::Right,
            label: None,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }

    /// The same dimension with poles exchanged.
    pub fn swapped(&self) -> Self {
        DimensionSpec {
            left_words: self.right_words.clone(),
            right_words: self.left_words.clone(),
            paired: self
                .paired
                .as_ref()
                .map(|p| p.iter().map(|(l, r)| (r.clone(), l.clone())).collect()),
            high_pole: match self.high_pole {
                Pole::Left => Pole::Right,
                Pole::Right => Pole::Left,
            },
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("dimension {:?}: {msg}", self.name)));
        if self.name.trim().is_empty() {
            return bad("empty name".into());
        }
        if let Some(mc) = &self.multiclass {
            if mc.categories.len() < 2 {
                return bad("multiclass needs at least two categories".into());
            }
            if mc.default == mc.contrast {
                return bad("multiclass default and contrast must differ".into());
            }
            for wanted in [&mc.default, &mc.contrast] {
                if mc.category(wanted).is_none() {
                    return Err(Error::UnknownCategory {
                        dimension: self.name.clone(),
                        category: wanted.clone(),
                    });
                }
            }
            if let Some(c) = mc.categories.iter().find(|c| c.words.is_empty()) {
                return bad(format!("category {:?} has no words", c.name));
            }
            return Ok(());
        }
        if self.left_words.is_empty() || self.right_words.is_empty() {
            return bad("both poles need at least one word".into());
        }
        if let Some(pairs) = &self.paired {
            if pairs.is_empty() {
                return bad("explicit pair list is empty".into());
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
struct SpecFile {
    #[serde(rename = "dimension")]
    dimensions: Vec<DimensionSpec>,
}

/// Parses a dimension-spec document. `json` selects JSON, otherwise TOML.
/// Both carry a top-level `dimension` array.
pub fn parse_dimension_specs(text: &str, json: bool) -> Result<Vec<DimensionSpec>> {
    let file: SpecFile = if json {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("dimension spec: {e}")))?
    } else {
        toml::from_str(text).map_err(|e| Error::InvalidInput(format!("dimension spec: {e}")))?
    };
    for spec in &file.dimensions {
        spec.validate()?;
    }
    Ok(file.dimensions)
}

pub fn load_dimension_specs(path: impl AsRef<Path>) -> Result<Vec<DimensionSpec>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let json = path.extension().is_some_and(|e| e == "json");
    parse_dimension_specs(&text, json)
}
