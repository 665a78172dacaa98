//! How much each dimension matters when people label one another.
//!
//! Separate logistic regressions for IsA and SeenWith questions predict
//! whether a candidate answer was selected from the absolute differences
//! between the question and answer identities on every standardized
//! dimension. A dimension's importance is the larger of its two
//! coefficient magnitudes: a strongly negative coefficient (distance
//! suppresses selection) marks a dimension as important just as a strongly
//! positive one (assortativity) does.

use std::collections::BTreeMap;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bootstrap_percentile, fit_binomial, pearson, BootstrapCI, FitOptions, FitResult, Outcomes};
use crate::survey::{BeliefMatrix, LabelingObservation, QuestionType};

use super::RegressionConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalienceResult {
    pub dimensions: Vec<String>,
    pub isa: FitResult,
    pub seen_with: FitResult,
    /// Per-dimension intervals; empty when bootstrapping was disabled.
    pub isa_ci: Vec<BootstrapCI>,
    pub seen_with_ci: Vec<BootstrapCI>,
    /// `max(|isa|, |seen_with|)` per dimension.
    pub importance: Vec<f64>,
    pub isa_observations: usize,
    pub seen_with_observations: usize,
    /// Observations whose identities are absent from the belief matrix.
    pub dropped_observations: usize,
}

impl SalienceResult {
    pub fn importance_by_dimension(&self) -> BTreeMap<String, f64> {
        self.dimensions.iter().cloned().zip(self.importance.iter().copied()).collect()
    }
}

/// `|X[question] - X[answer]|` feature rows and 0/1 outcomes for one question
/// type, plus the number of observations skipped for missing identities.
pub fn salience_features(
    observations: &[LabelingObservation],
    matrix: &BeliefMatrix,
    question_type: QuestionType,
) -> (Vec<Vec<f64>>, Vec<f64>, usize) {
    let mut features = Vec::new();
    let mut outcomes = Vec::new();
    let mut dropped = 0;
    for o in observations.iter().filter(|o| o.question_type == question_type) {
        match (matrix.row_of(&o.question_identity), matrix.row_of(&o.answer_identity)) {
            (Some(q), Some(a)) => {
                features.push(q.iter().zip(a).map(|(x, y)| (x - y).abs()).collect());
                outcomes.push(if o.selected { 1.0 } else { 0.0 });
            }
            _ => dropped += 1,
        }
    }
    (features, outcomes, dropped)
}

fn fit_with_ci(
    features: &[Vec<f64>],
    outcomes: &[f64],
    config: &RegressionConfig,
    stream: u64,
) -> Result<(FitResult, Vec<BootstrapCI>)> {
    let options = FitOptions::with_ridge(config.ridge);
    let fit = fit_binomial(features, Outcomes::Binary(outcomes), None, options)?;
    if config.resamples == 0 {
        return Ok((fit, Vec::new()));
    }
    let cis = bootstrap_percentile(
        features.len(),
        &fit.coefficients,
        config.level,
        config.resamples,
        config.seed.wrapping_add(stream),
        |idx| {
            let x: Vec<&[f64]> = idx.iter().map(|&i| features[i].as_slice()).collect();
            let y: Vec<f64> = idx.iter().map(|&i| outcomes[i]).collect();
            fit_binomial(&x, Outcomes::Binary(&y), None, options)
                .ok()
                .map(|f| f.coefficients)
        },
    )?;
    Ok((fit, cis))
}

pub fn fit_salience(
    observations: &[LabelingObservation],
    matrix: &BeliefMatrix,
    config: &RegressionConfig,
) -> Result<SalienceResult> {
    let (isa_x, isa_y, isa_dropped) = salience_features(observations, matrix, QuestionType::IsA);
    let (sw_x, sw_y, sw_dropped) = salience_features(observations, matrix, QuestionType::SeenWith);
    let dropped = isa_dropped + sw_dropped;
    if dropped > 0 {
        warn!("{dropped} labeling observations reference identities outside the belief matrix");
    }
    for (label, x) in [("IsA", &isa_x), ("SeenWith", &sw_x)] {
        if x.is_empty() {
            return Err(Error::InvalidInput(format!("no usable {label} observations")));
        }
    }
    let (isa, isa_ci) = fit_with_ci(&isa_x, &isa_y, config, 0)?;
    let (seen_with, seen_with_ci) = fit_with_ci(&sw_x, &sw_y, config, 1)?;
    let importance = isa
        .coefficients
        .iter()
        .zip(&seen_with.coefficients)
        .map(|(a, b)| a.abs().max(b.abs()))
        .collect();
    Ok(SalienceResult {
        dimensions: matrix.dimensions.clone(),
        isa,
        seen_with,
        isa_ci,
        seen_with_ci,
        importance,
        isa_observations: isa_x.len(),
        seen_with_observations: sw_x.len(),
        dropped_observations: dropped,
    })
}

/// Pearson correlation between a per-dimension statistic (importance or
/// survey variance) and per-dimension accuracy, over shared dimensions.
pub fn salience_accuracy_correlation(
    statistic: &BTreeMap<String, f64>,
    accuracy: &BTreeMap<String, f64>,
) -> Result<f64> {
    let (a, b): (Vec<f64>, Vec<f64>) = statistic
        .iter()
        .filter_map(|(d, s)| accuracy.get(d).map(|acc| (*s, *acc)))
        .unzip();
    if a.len() < 3 {
        return Err(Error::TooFewValues {
            required: 3,
            found: a.len(),
        });
    }
    pearson(&a, &b)
}
