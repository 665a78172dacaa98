//! Measurement runs and their evaluation against survey data.

mod factors;
mod ranking;
mod salience;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use factors::{belief_factor_regression, FactorRegression, FACTOR_NAMES};
pub use ranking::{
    belief_ranking_score, belief_ranking_scores, grand_mean, ranking_inputs, BeliefRankingScore,
    RankedIdentity,
};
pub use salience::{fit_salience, salience_accuracy_correlation, salience_features, SalienceResult};

use crate::axes::{build_direction, position, resolve_multiclass, DimensionSpec, Measure, Pole, WordsetSource};
use crate::embedding::{EmbeddingModel, SkippedWord};
use crate::error::{Error, Result};
use crate::numerics::{pearson, DEFAULT_RIDGE};
use crate::survey::SurveyDataset;

/// Settings shared by the regression analyses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionConfig {
    pub ridge: f64,
    /// Bootstrap resamples for coefficient intervals; 0 skips them.
    pub resamples: usize,
    pub level: f64,
    pub seed: u64,
}

impl Default for RegressionConfig {
    fn default() -> Self {
        RegressionConfig {
            ridge: DEFAULT_RIDGE,
            resamples: 1000,
            level: 0.95,
            seed: 0,
        }
    }
}

/// A model together with its unit-normalized copy, so each measure can be
/// handed the variant it expects.
#[derive(Debug, Clone)]
pub struct ModelViews {
    pub raw: EmbeddingModel,
    pub unit: EmbeddingModel,
}

impl ModelViews {
    pub fn new(raw: EmbeddingModel) -> Result<Self> {
        let unit = raw.unit_normalize()?;
        Ok(ModelViews { raw, unit })
    }

    pub fn name(&self) -> &str {
        self.raw.name()
    }

    pub fn for_measure(&self, measure: Measure) -> &EmbeddingModel {
        if measure.requires_normalized() {
            &self.unit
        } else {
            &self.raw
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RunKey {
    pub embedding: String,
    pub dimension: String,
    pub wordset: WordsetSource,
    pub measure: Measure,
}

impl RunKey {
    fn sort_tuple(&self) -> (&str, &str, &str, &str) {
        (&self.embedding, &self.dimension, self.wordset.as_str(), self.measure.id())
    }
}

// (embedding, dimension, wordset, measure), compared as strings
impl Ord for RunKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_tuple().cmp(&other.sort_tuple())
    }
}

impl PartialOrd for RunKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Scores of a set of identities under one (embedding, word set, measure)
/// combination.
///
/// `scores` are oriented so that larger means closer to the dimension's
/// survey-high pole.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRun {
    pub key: RunKey,
    pub label: String,
    pub scores: Vec<(String, f64)>,
    /// Identities and pole words that could not be resolved.
    pub skipped: Vec<SkippedWord>,
}

impl MeasurementRun {
    pub fn score_of(&self, identity: &str) -> Option<f64> {
        self.scores.iter().find(|(i, _)| i == identity).map(|(_, s)| *s)
    }
}

/// Scores `identities` along a binary dimension.
pub fn run_measurement(
    model: &EmbeddingModel,
    spec: &DimensionSpec,
    measure: Measure,
    identities: &[String],
) -> Result<MeasurementRun> {
    if spec.multiclass.is_some() {
        return Err(Error::InvalidInput(format!(
            "dimension {:?} is multiclass; resolve it into binary specs first",
            spec.name
        )));
    }
    if model.is_normalized() != measure.requires_normalized() {
        return Err(Error::NormalizationMismatch {
            measure: measure.id(),
            expected: if measure.requires_normalized() { "normalized" } else { "unnormalized" },
            found: if model.is_normalized() { "normalized" } else { "unnormalized" },
        });
    }
    let direction = build_direction(spec, measure.direction_method(), model)?;
    let sign = match spec.high_pole {
        Pole::Left => 1.0,
        Pole::Right => -1.0,
    };
    let mut scores = Vec::with_capacity(identities.len());
    let mut skipped = direction.skipped.clone();
    for identity in identities {
        match model.lookup(identity) {
            Some(w) => scores.push((identity.clone(), sign * position(measure, &direction, w.values)?)),
            None => skipped.push(SkippedWord::oov(identity)),
        }
    }
    Ok(MeasurementRun {
        key: RunKey {
            embedding: model.name().to_owned(),
            dimension: spec.name.clone(),
            wordset: spec.source,
            measure,
        },
        label: spec.label().to_owned(),
        scores,
        skipped,
    })
}

/// Runs a dimension, expanding multiclass specs into one run per category.
pub fn measure_dimension(
    views: &ModelViews,
    spec: &DimensionSpec,
    measure: Measure,
    identities: &[String],
) -> Result<Vec<MeasurementRun>> {
    let model = views.for_measure(measure);
    if spec.multiclass.is_some() {
        resolve_multiclass(spec, measure)?
            .iter()
            .map(|binary| run_measurement(model, binary, measure, identities))
            .collect()
    } else {
        Ok(vec![run_measurement(model, spec, measure, identities)?])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionAccuracy {
    pub key: RunKey,
    pub dataset: String,
    pub pearson_r: f64,
    pub n_identities: usize,
}

/// Pairs run scores with survey means on the run's dimension, in run order.
pub(crate) fn paired_with_survey<'a>(
    run: &'a MeasurementRun,
    survey: &'a SurveyDataset,
) -> impl Iterator<Item = (&'a str, f64, &'a crate::survey::BeliefStats)> + 'a {
    run.scores
        .iter()
        .filter_map(move |(id, s)| survey.get(&run.key.dimension, id).map(|b| (id.as_str(), *s, b)))
}

/// Pearson correlation between survey means and run scores over the
/// identities present in both.
pub fn dimension_accuracy(run: &MeasurementRun, survey: &SurveyDataset) -> Result<DimensionAccuracy> {
    let (means, scores): (Vec<f64>, Vec<f64>) = paired_with_survey(run, survey).map(|(_, s, b)| (b.mean, s)).unzip();
    if means.len() < 3 {
        return Err(Error::TooFewValues {
            required: 3,
            found: means.len(),
        });
    }
    Ok(DimensionAccuracy {
        key: run.key.clone(),
        dataset: survey.name.clone(),
        pearson_r: pearson(&means, &scores)?,
        n_identities: means.len(),
    })
}

/// Result of evaluating one run on one dataset; degenerate runs are kept so
/// reports can show them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AccuracyOutcome {
    Valid(DimensionAccuracy),
    Degenerate { key: RunKey, dataset: String, reason: String },
}

impl AccuracyOutcome {
    pub fn evaluate(run: &MeasurementRun, survey: &SurveyDataset) -> Self {
        match dimension_accuracy(run, survey) {
            Ok(acc) => AccuracyOutcome::Valid(acc),
            Err(e) => AccuracyOutcome::Degenerate {
                key: run.key.clone(),
                dataset: survey.name.clone(),
                reason: e.to_string(),
            },
        }
    }

    pub fn key(&self) -> &RunKey {
        match self {
            AccuracyOutcome::Valid(a) => &a.key,
            AccuracyOutcome::Degenerate { key, .. } => key,
        }
    }

    pub fn dataset(&self) -> &str {
        match self {
            AccuracyOutcome::Valid(a) => &a.dataset,
            AccuracyOutcome::Degenerate { dataset, .. } => dataset,
        }
    }
}

/// `(dataset, dimension)` grouping used for best-settings selection.
pub type GroupKey = (String, String);

/// Highest Pearson r in a group; ties go to the lexicographically smallest
/// (embedding, word set, measure). Degenerate entries are ignored.
pub fn best_in_group<'a>(group: impl IntoIterator<Item = &'a AccuracyOutcome>) -> Option<&'a DimensionAccuracy> {
    group
        .into_iter()
        .filter_map(|o| match o {
            AccuracyOutcome::Valid(a) => Some(a),
            AccuracyOutcome::Degenerate { .. } => None,
        })
        .min_by(|a, b| b.pearson_r.total_cmp(&a.pearson_r).then_with(|| a.key.cmp(&b.key)))
}

/// Best setting per `(dataset, dimension)`. A group with no valid accuracy
/// maps to an [`Error::EmptyGroup`].
pub fn select_best_settings(outcomes: &[AccuracyOutcome]) -> BTreeMap<GroupKey, Result<&DimensionAccuracy>> {
    let mut groups: BTreeMap<GroupKey, Vec<&AccuracyOutcome>> = BTreeMap::new();
    for o in outcomes {
        groups
            .entry((o.dataset().to_owned(), o.key().dimension.clone()))
            .or_default()
            .push(o);
    }
    groups
        .into_iter()
        .map(|(g, members)| {
            let best = best_in_group(members).ok_or_else(|| Error::EmptyGroup(format!("{}/{}", g.0, g.1)));
            (g, best)
        })
        .collect()
}
