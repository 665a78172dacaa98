//! Survey belief datasets and identity-labeling responses.
//!
//! Every dataset is rescaled so means lie in `[0, 1]`. Survey CSV layouts:
//!
//! | schema               | columns                                                        | native range |
//! |----------------------|----------------------------------------------------------------|--------------|
//! | `this-paper`         | `identity,dimension,mean,sd,n[,log_frequency][,synsets]`       | `[0, 1]`     |
//! | `bolukbasi`          | `identity,mean[,sd,n][,log_frequency][,synsets]` (gender only) | `[0, 10]`    |
//! | `personality-traits` | `identity,dimension,mean,sd,n[,log_frequency][,synsets]`       | `[1, 5]`     |
//! | `epa-dictionary`     | `identity,dimension,mean,sd,n[,log_frequency][,synsets]`       | `[-4.3, 4.3]`|
//!
//! Native ranges can be overridden through [`SchemaConfig`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{mean, median, sample_variance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurveySchema {
    ThisPaper,
    Bolukbasi,
    PersonalityTraits,
    EpaDictionary,
}

impl SurveySchema {
    pub fn as_str(self) -> &'static str {
        match self {
            SurveySchema::ThisPaper => "this-paper",
            SurveySchema::Bolukbasi => "bolukbasi",
            SurveySchema::PersonalityTraits => "personality-traits",
            SurveySchema::EpaDictionary => "epa-dictionary",
        }
    }

    pub fn native_range(self) -> (f64, f64) {
        match self {
            SurveySchema::ThisPaper => (0.0, 1.0),
            SurveySchema::Bolukbasi => (0.0, 10.0),
            SurveySchema::PersonalityTraits => (1.0, 5.0),
            SurveySchema::EpaDictionary => (-4.3, 4.3),
        }
    }

    fn variance_optional(self) -> bool {
        self == SurveySchema::Bolukbasi
    }
}

impl fmt::Display for SurveySchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SurveySchema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SurveySchema::ThisPaper,
            SurveySchema::Bolukbasi,
            SurveySchema::PersonalityTraits,
            SurveySchema::EpaDictionary,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
        .ok_or_else(|| Error::UnknownSchema(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemaConfig {
    pub schema: SurveySchema,
    pub native_range: (f64, f64),
}

impl From<SurveySchema> for SchemaConfig {
    fn from(schema: SurveySchema) -> Self {
        SchemaConfig {
            schema,
            native_range: schema.native_range(),
        }
    }
}

/// Survey summary for one identity on one dimension, on the `[0, 1]` scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefStats {
    pub identity: String,
    pub dimension: String,
    pub mean: f64,
    pub sd: f64,
    /// Respondent count; 0 when unknown.
    pub n: u64,
    pub se: f64,
    /// True when the source carried no variance information and `se` is 0.
    pub se_missing: bool,
    pub log_frequency: Option<f64>,
    pub synsets: Option<u64>,
}

/// A loaded survey dataset, keyed by `(dimension, identity)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyDataset {
    pub name: String,
    pub config: SchemaConfig,
    stats: BTreeMap<(String, String), BeliefStats>,
}

impl SurveyDataset {
    pub fn from_stats(name: impl Into<String>, config: SchemaConfig, stats: impl IntoIterator<Item = BeliefStats>) -> Self {
        SurveyDataset {
            name: name.into(),
            config,
            stats: stats
                .into_iter()
                .map(|s| ((s.dimension.clone(), s.identity.clone()), s))
                .collect(),
        }
    }

    pub fn get(&self, dimension: &str, identity: &str) -> Option<&BeliefStats> {
        self.stats.get(&(dimension.to_owned(), identity.to_owned()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &BeliefStats> {
        self.stats.values()
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    pub fn dimensions(&self) -> BTreeSet<&str> {
        self.stats.keys().map(|(d, _)| d.as_str()).collect()
    }

    pub fn identities(&self) -> BTreeSet<&str> {
        self.stats.keys().map(|(_, i)| i.as_str()).collect()
    }

    /// Stats on one dimension, ordered by identity.
    pub fn on_dimension<'a>(&'a self, dimension: &'a str) -> impl Iterator<Item = &'a BeliefStats> + 'a {
        self.stats
            .range((dimension.to_owned(), String::new())..)
            .take_while(move |((d, _), _)| d == dimension)
            .map(|(_, s)| s)
    }

    pub fn se_missing(&self) -> bool {
        self.stats.values().any(|s| s.se_missing)
    }
}

fn parse_field<T: std::str::FromStr>(raw: &str, column: &str, source: &str, line: usize) -> Result<T> {
    raw.trim().parse().map_err(|_| Error::MalformedRow {
        source_name: source.to_owned(),
        line,
        message: format!("column {column}: cannot parse {raw:?}"),
    })
}

/// Reads a survey CSV in the given schema.
pub fn read_survey<R: Read>(name: &str, reader: R, config: SchemaConfig) -> Result<SurveyDataset> {
    let (lo, hi) = config.native_range;
    if !(hi > lo) {
        return Err(Error::InvalidInput(format!("{name}: native range [{lo}, {hi}] is empty")));
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |n: &str| headers.iter().position(|h| h == n);
    let has_dimension = config.schema != SurveySchema::Bolukbasi;
    let mut required = vec!["identity", "mean"];
    if has_dimension {
        required.push("dimension");
    }
    if !config.schema.variance_optional() {
        required.extend(["sd", "n"]);
    }
    for r in &required {
        if col(r).is_none() {
            return Err(Error::MalformedRow {
                source_name: name.to_owned(),
                line: 1,
                message: format!("missing column {r:?} required by schema {}", config.schema),
            });
        }
    }
    let (c_id, c_mean) = (col("identity").unwrap(), col("mean").unwrap());
    let (c_dim, c_sd, c_n) = (col("dimension"), col("sd"), col("n"));
    let (c_freq, c_syn) = (col("log_frequency"), col("synsets"));

    let mut stats = BTreeMap::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let field = |c: Option<usize>| c.and_then(|c| record.get(c)).filter(|s| !s.is_empty());
        let malformed = |message: String| Error::MalformedRow {
            source_name: name.to_owned(),
            line,
            message,
        };

        let identity = field(Some(c_id)).ok_or_else(|| malformed("empty identity".into()))?.to_owned();
        let dimension = if has_dimension {
            field(c_dim).ok_or_else(|| malformed("empty dimension".into()))?.to_owned()
        } else {
            field(c_dim).unwrap_or("gender").to_owned()
        };
        let raw_mean: f64 = parse_field(field(Some(c_mean)).unwrap_or(""), "mean", name, line)?;
        let tol = 1e-9 * (hi - lo);
        if !raw_mean.is_finite() || raw_mean < lo - tol || raw_mean > hi + tol {
            return Err(malformed(format!("mean {raw_mean} outside native range [{lo}, {hi}]")));
        }
        let scaled_mean = ((raw_mean - lo) / (hi - lo)).clamp(0.0, 1.0);

        let (sd, n, se, se_missing) = match (field(c_sd), field(c_n)) {
            (Some(sd), Some(n)) => {
                let sd: f64 = parse_field(sd, "sd", name, line)?;
                let n: u64 = parse_field(n, "n", name, line)?;
                if !(sd >= 0.0) || !sd.is_finite() {
                    return Err(malformed(format!("negative or invalid sd {sd}")));
                }
                if n == 0 {
                    return Err(malformed("n must be at least 1".into()));
                }
                let sd = sd / (hi - lo);
                (sd, n, sd / (n as f64).sqrt(), false)
            }
            (None, None) if config.schema.variance_optional() => (0.0, 0, 0.0, true),
            _ => return Err(malformed(format!("schema {} needs both sd and n", config.schema))),
        };
        let log_frequency = field(c_freq)
            .map(|v| parse_field::<f64>(v, "log_frequency", name, line))
            .transpose()?;
        let synsets = field(c_syn)
            .map(|v| parse_field::<u64>(v, "synsets", name, line))
            .transpose()?;

        let key = (dimension.clone(), identity.clone());
        if stats.contains_key(&key) {
            return Err(malformed(format!("duplicate row for {identity:?} on {dimension:?}")));
        }
        stats.insert(
            key,
            BeliefStats {
                identity,
                dimension,
                mean: scaled_mean,
                sd,
                n,
                se,
                se_missing,
                log_frequency,
                synsets,
            },
        );
    }
    if stats.values().any(|s: &BeliefStats| s.se_missing) {
        warn!("{name}: no variance information; standard errors set to 0");
    }
    Ok(SurveyDataset {
        name: name.to_owned(),
        config,
        stats,
    })
}

pub fn load_survey(path: impl AsRef<Path>, config: impl Into<SchemaConfig>) -> Result<SurveyDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let name = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    read_survey(&name, file, config.into())
}

/// Writes the dataset back in its own schema and native range.
pub fn write_survey<W: Write>(dataset: &SurveyDataset, out: W) -> Result<()> {
    let (lo, hi) = dataset.config.native_range;
    let schema = dataset.config.schema;
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["identity"];
    if schema != SurveySchema::Bolukbasi {
        header.push("dimension");
    }
    header.extend(["mean", "sd", "n", "log_frequency", "synsets"]);
    w.write_record(&header)?;
    for s in dataset.iter() {
        let mut row = vec![s.identity.clone()];
        if schema != SurveySchema::Bolukbasi {
            row.push(s.dimension.clone());
        }
        row.push((s.mean * (hi - lo) + lo).to_string());
        if s.se_missing {
            row.extend([String::new(), String::new()]);
        } else {
            row.push((s.sd * (hi - lo)).to_string());
            row.push(s.n.to_string());
        }
        row.push(s.log_frequency.map(|v| v.to_string()).unwrap_or_default());
        row.push(s.synsets.map(|v| v.to_string()).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(dataset.name.clone(), e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionSummary {
    /// Sample (n - 1) variance of the per-identity means.
    pub variance: f64,
    pub median: f64,
    pub identities: usize,
}

pub fn dimension_summary(dataset: &SurveyDataset, dimension: &str) -> Result<DimensionSummary> {
    let means: Vec<f64> = dataset.on_dimension(dimension).map(|s| s.mean).collect();
    if means.len() < 3 {
        return Err(Error::TooFewValues {
            required: 3,
            found: means.len(),
        });
    }
    Ok(DimensionSummary {
        variance: sample_variance(&means),
        median: median(&means).expect("nonempty"),
        identities: means.len(),
    })
}

/// Identities x dimensions grid of column-standardized survey means.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefMatrix {
    pub identities: Vec<String>,
    pub dimensions: Vec<String>,
    values: Vec<f64>,
    /// Identities left out because some dimension had no value.
    pub dropped: Vec<String>,
}

impl BeliefMatrix {
    pub fn get(&self, identity_row: usize, dimension_col: usize) -> f64 {
        self.values[identity_row * self.dimensions.len() + dimension_col]
    }

    pub fn row(&self, identity_row: usize) -> &[f64] {
        let d = self.dimensions.len();
        &self.values[identity_row * d..(identity_row + 1) * d]
    }

    pub fn row_of(&self, identity: &str) -> Option<&[f64]> {
        self.identities.iter().position(|i| i == identity).map(|r| self.row(r))
    }

    pub fn column(&self, dimension_col: usize) -> Vec<f64> {
        (0..self.identities.len()).map(|r| self.get(r, dimension_col)).collect()
    }
}

/// Centers each dimension to mean 0 and scales it to sample sd 1 over the
/// identities that have a value on every dimension.
pub fn build_belief_matrix(dataset: &SurveyDataset) -> Result<BeliefMatrix> {
    let dimensions: Vec<String> = dataset.dimensions().into_iter().map(str::to_owned).collect();
    let mut identities = Vec::new();
    let mut dropped = Vec::new();
    for id in dataset.identities() {
        if dimensions.iter().all(|d| dataset.get(d, id).is_some()) {
            identities.push(id.to_owned());
        } else {
            warn!("{}: identity {id:?} lacks some dimensions; dropped from belief matrix", dataset.name);
            dropped.push(id.to_owned());
        }
    }
    if identities.len() < 2 {
        return Err(Error::TooFewValues {
            required: 2,
            found: identities.len(),
        });
    }
    let d = dimensions.len();
    let mut values = vec![0.0; identities.len() * d];
    for (c, dim) in dimensions.iter().enumerate() {
        let col: Vec<f64> = identities.iter().map(|i| dataset.get(dim, i).unwrap().mean).collect();
        let m = mean(&col);
        let sd = sample_variance(&col).sqrt();
        if !(sd > 0.0) {
            return Err(Error::InvalidInput(format!(
                "dimension {dim:?} has zero variance and cannot be standardized"
            )));
        }
        for (r, v) in col.iter().enumerate() {
            values[r * d + c] = (v - m) / sd;
        }
    }
    Ok(BeliefMatrix {
        identities,
        dimensions,
        values,
        dropped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QuestionType {
    IsA,
    SeenWith,
}

impl QuestionType {
    pub fn as_str(self) -> &'static str {
        match self {
            QuestionType::IsA => "IsA",
            QuestionType::SeenWith => "SeenWith",
        }
    }
}

impl std::str::FromStr for QuestionType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', '-', ' '], "").as_str() {
            "isa" => Ok(QuestionType::IsA),
            "seenwith" => Ok(QuestionType::SeenWith),
            _ => Err(Error::InvalidInput(format!("unknown question type {s:?}"))),
        }
    }
}

/// One (question identity, candidate answer) pairing from the labeling task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingObservation {
    pub question_type: QuestionType,
    pub question_identity: String,
    pub answer_identity: String,
    pub selected: bool,
}

const NO_ANSWER: [&str; 4] = ["", "none", "all are equally unlikely", "all equally unlikely"];

/// Reads labeling responses with columns
/// `question_id,question_type,question_identity,answer_1..answer_4,selected`.
///
/// Each answered question expands into four observations, one per
/// candidate. Rows whose `selected` is empty, `none`, or "all are equally
/// unlikely" are dropped.
pub fn read_labeling<R: Read>(name: &str, reader: R) -> Result<Vec<LabelingObservation>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let need = [
        "question_type",
        "question_identity",
        "answer_1",
        "answer_2",
        "answer_3",
        "answer_4",
        "selected",
    ];
    let mut idx = Vec::with_capacity(need.len());
    for n in need {
        idx.push(headers.iter().position(|h| h == n).ok_or_else(|| Error::MalformedRow {
            source_name: name.to_owned(),
            line: 1,
            message: format!("missing column {n:?}"),
        })?);
    }

    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let get = |k: usize| record.get(idx[k]).unwrap_or("");
        let malformed = |message: String| Error::MalformedRow {
            source_name: name.to_owned(),
            line,
            message,
        };
        let selected = get(6);
        if NO_ANSWER.contains(&selected.to_lowercase().as_str()) {
            continue;
        }
        let question_type: QuestionType = get(0).parse().map_err(|e: Error| malformed(e.to_string()))?;
        let question = get(1);
        if question.is_empty() {
            return Err(malformed("empty question identity".into()));
        }
        let answers: Vec<&str> = (2..6).map(get).collect();
        if !answers.contains(&selected) {
            return Err(malformed(format!("selected answer {selected:?} is not among the candidates")));
        }
        for answer in answers {
            if answer == question {
                warn!("{name}:{line}: candidate equals question identity {question:?}; skipped");
                continue;
            }
            out.push(LabelingObservation {
                question_type,
                question_identity: question.to_owned(),
                answer_identity: answer.to_owned(),
                selected: answer == selected,
            });
        }
    }
    Ok(out)
}

pub fn load_labeling(path: impl AsRef<Path>) -> Result<Vec<LabelingObservation>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_labeling(&path.display().to_string(), file)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, schema: SurveySchema) -> Result<SurveyDataset> {
        read_survey("t", text.as_bytes(), schema.into())
    }

    #[test]
    fn epa_endpoint_maps_to_zero() {
        let d = read("identity,dimension,mean,sd,n\nthug,evaluation,-4.3,1.0,30\n", SurveySchema::EpaDictionary).unwrap();
        let s = d.get("evaluation", "thug").unwrap();
        assert_eq!(s.mean, 0.0);
        assert!((s.sd - 1.0 / 8.6).abs() < 1e-15);
    }

    #[test]
    fn se_from_sd_and_n() {
        let d = read("identity,dimension,mean,sd,n\nboy,age,0.5,0.2,16\n", SurveySchema::ThisPaper).unwrap();
        let s = d.get("age", "boy").unwrap();
        assert!((s.se - 0.05).abs() < 1e-12);
        assert!(!s.se_missing);
    }

    #[test]
    fn bolukbasi_mean_only_is_flagged() {
        let d = read("identity,mean\nnurse,8\n", SurveySchema::Bolukbasi).unwrap();
        let s = d.get("gender", "nurse").unwrap();
        assert_eq!((s.se, s.se_missing), (0.0, true));
        assert!((s.mean - 0.8).abs() < 1e-15);
        assert!(d.se_missing());
    }

    #[test]
    fn survey_errors_carry_lines() {
        let bad_mean = read("identity,dimension,mean,sd,n\na,age,0.5,0.1,3\nb,age,1.5,0.1,3\n", SurveySchema::ThisPaper);
        assert!(matches!(bad_mean, Err(Error::MalformedRow { line: 3, .. })), "{bad_mean:?}");
        let neg_sd = read("identity,dimension,mean,sd,n\na,age,0.5,-0.1,3\n", SurveySchema::ThisPaper);
        assert!(matches!(neg_sd, Err(Error::MalformedRow { line: 2, .. })));
        let no_sd = read("identity,dimension,mean\na,age,0.5\n", SurveySchema::ThisPaper);
        assert!(no_sd.is_err());
        let text = read("identity,dimension,mean,sd,n\na,age,high,0.1,3\n", SurveySchema::ThisPaper);
        assert!(matches!(text, Err(Error::MalformedRow { .. })));
        assert!(matches!("gallup".parse::<SurveySchema>(), Err(Error::UnknownSchema(_))));
    }

    #[test]
    fn round_trip_through_native_schema() {
        let text = "identity,dimension,mean,sd,n,log_frequency,synsets\n\
                    a,evaluation,1.2,0.8,20,3.5,4\nb,evaluation,-2.1,1.1,25,,\n";
        let d = read(text, SurveySchema::EpaDictionary).unwrap();
        let mut buf = Vec::new();
        write_survey(&d, &mut buf).unwrap();
        let back = read_survey("t", buf.as_slice(), d.config).unwrap();
        for (x, y) in d.iter().zip(back.iter()) {
            assert!((x.mean - y.mean).abs() < 1e-12 && (x.se - y.se).abs() < 1e-12);
            assert_eq!((x.n, x.synsets, x.log_frequency), (y.n, y.synsets, y.log_frequency));
        }

        let b = read("identity,mean\nnurse,8\nchef,3.5\n", SurveySchema::Bolukbasi).unwrap();
        let mut buf = Vec::new();
        write_survey(&b, &mut buf).unwrap();
        assert_eq!(read_survey("t", buf.as_slice(), b.config).unwrap(), b);
    }

    #[test]
    fn summaries() {
        let d = read(
            "identity,dimension,mean,sd,n\na,x,0,0,1\nb,x,0.5,0,1\nc,x,1,0,1\nd,y,0.1,0,1\ne,y,0.2,0,1\nf,y,0.9,0,1\ng,y,1.0,0,1\n",
            SurveySchema::ThisPaper,
        )
        .unwrap();
        let x = dimension_summary(&d, "x").unwrap();
        assert!((x.variance - 0.25).abs() < 1e-15);
        assert_eq!(x.median, 0.5);
        assert!((dimension_summary(&d, "y").unwrap().median - 0.55).abs() < 1e-15);
        assert!(dimension_summary(&d, "z").is_err());
    }

    #[test]
    fn belief_matrix_standardizes() {
        let d = read("identity,dimension,mean,sd,n\na,x,0,0,1\nb,x,1,0,1\n", SurveySchema::ThisPaper).unwrap();
        let m = build_belief_matrix(&d).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.get(0, 0) + h).abs() < 1e-15 && (m.get(1, 0) - h).abs() < 1e-15);

        let flat = read("identity,dimension,mean,sd,n\na,x,0.3,0,1\nb,x,0.3,0,1\n", SurveySchema::ThisPaper).unwrap();
        assert!(build_belief_matrix(&flat).is_err());

        let gap = read(
            "identity,dimension,mean,sd,n\na,x,0,0,1\nb,x,1,0,1\nc,x,0.5,0,1\na,y,0.2,0,1\nb,y,0.9,0,1\n",
            SurveySchema::ThisPaper,
        )
        .unwrap();
        let m = build_belief_matrix(&gap).unwrap();
        assert_eq!(m.identities, ["a", "b"]);
        assert_eq!(m.dropped, ["c"]);
    }

    #[test]
    fn labeling_expands_questions() {
        let text = "question_id,question_type,question_identity,answer_1,answer_2,answer_3,answer_4,selected\n\
                    1,IsA,mother,adult,sister,son,lady,lady\n\
                    2,SeenWith,mother,adult,sister,son,lady,all are equally unlikely\n";
        let obs = read_labeling("t", text.as_bytes()).unwrap();
        assert_eq!(obs.len(), 4);
        let flags: Vec<bool> = obs.iter().map(|o| o.selected).collect();
        assert_eq!(flags, [false, false, false, true]);
        assert_eq!(obs[0].answer_identity, "adult");

        let bad = "question_id,question_type,question_identity,answer_1,answer_2,answer_3,answer_4,selected\n\
                   1,IsA,mother,adult,sister,son,lady,doctor\n";
        assert!(matches!(read_labeling("t", bad.as_bytes()), Err(Error::MalformedRow { line: 2, .. })));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn rescaling_preserves_order(values in proptest::collection::vec(-4.3f64..4.3, 3..30)) {
                let mut text = String::from("identity,dimension,mean,sd,n\n");
                for (i, v) in values.iter().enumerate() {
                    text.push_str(&format!("id{i:03},evaluation,{v},1,10\n"));
                }
                let d = read(&text, SurveySchema::EpaDictionary).unwrap();
                let scaled: Vec<f64> = d.on_dimension("evaluation").map(|s| s.mean).collect();
                for i in 0..values.len() {
                    for j in 0..values.len() {
                        prop_assert_eq!(values[i] < values[j], scaled[i] < scaled[j]);
                    }
                }
            }

            #[test]
            fn matrix_columns_standardized(values in proptest::collection::vec(0.0f64..1.0, 4..40)) {
                let mut text = String::from("identity,dimension,mean,sd,n\n");
                for (i, v) in values.iter().enumerate() {
                    text.push_str(&format!("id{i:03},x,{v},0.1,10\nid{i:03},y,{},0.1,10\n", 1.0 - v * v));
                }
                let d = read(&text, SurveySchema::ThisPaper).unwrap();
                prop_assume!(sample_variance(&values) > 1e-6);
                let m = build_belief_matrix(&d).unwrap();
                for c in 0..2 {
                    let col = m.column(c);
                    prop_assert!(mean(&col).abs() < 1e-9);
                    prop_assert!((sample_variance(&col).sqrt() - 1.0).abs() < 1e-9);
                }
            }
        }
    }
}
