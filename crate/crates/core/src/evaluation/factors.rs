//! Which properties of a belief predict whether embeddings rank it well.
//!
//! A binomial GLM with linear terms: `N_c` successes out of `N` trials per
//! belief, regressed on the survey sd, the distance of the survey mean from
//! the dimension median, the identity's log frequency, and its synset count.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bootstrap_percentile, fit_binomial, median, BootstrapCI, FitOptions, FitResult, Outcomes};
use crate::survey::SurveyDataset;

use super::ranking::BeliefRankingScore;
use super::RegressionConfig;

pub const FACTOR_NAMES: [&str; 4] = ["sd", "distance_to_median", "log_frequency", "synsets"];

const MIN_BELIEFS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorRegression {
    /// Factor names, in coefficient order.
    pub factors: Vec<String>,
    pub fit: FitResult,
    pub cis: Vec<BootstrapCI>,
    pub beliefs: usize,
    /// Beliefs with `N == 0`, which carry no information.
    pub excluded_zero_n: usize,
}

struct Row {
    covariates: [Option<f64>; 4],
    successes: f64,
    trials: f64,
}

/// Fits the factor regression. Frequency and synset terms are used when at
/// least 20 beliefs carry them, otherwise the fit falls back to the survey
/// terms alone. The sd term is left out for datasets without variance data.
pub fn belief_factor_regression(
    scores: &[BeliefRankingScore],
    survey: &SurveyDataset,
    config: &RegressionConfig,
) -> Result<FactorRegression> {
    let mut medians: BTreeMap<&str, f64> = BTreeMap::new();
    let mut rows = Vec::new();
    let mut excluded_zero_n = 0;
    for s in scores {
        if s.n == 0 {
            excluded_zero_n += 1;
            continue;
        }
        let stats = survey.get(&s.dimension, &s.identity).ok_or_else(|| Error::MissingIdentity {
            identity: s.identity.clone(),
            context: format!("survey {} on {}", survey.name, s.dimension),
        })?;
        let med = *medians.entry(s.dimension.as_str()).or_insert_with(|| {
            let means: Vec<f64> = survey.on_dimension(&s.dimension).map(|b| b.mean).collect();
            median(&means).expect("dimension holds at least this belief")
        });
        rows.push(Row {
            covariates: [
                (!stats.se_missing).then_some(stats.sd),
                Some((stats.mean - med).abs()),
                stats.log_frequency,
                stats.synsets.map(|v| v as f64),
            ],
            successes: s.n_correct as f64,
            trials: s.n as f64,
        });
    }

    let use_sd = !survey.se_missing();
    let with_lexical = [use_sd, true, true, true];
    let survey_only = [use_sd, true, false, false];
    let select = |mask: &[bool; 4]| -> Vec<&Row> {
        rows.iter()
            .filter(|r| r.covariates.iter().zip(mask).all(|(c, m)| !m || c.is_some()))
            .collect()
    };
    let (mask, chosen) = {
        let full = select(&with_lexical);
        if full.len() >= MIN_BELIEFS {
            (with_lexical, full)
        } else {
            (survey_only, select(&survey_only))
        }
    };
    if chosen.len() < MIN_BELIEFS {
        return Err(Error::TooFewValues {
            required: MIN_BELIEFS,
            found: chosen.len(),
        });
    }

    let factors: Vec<String> = FACTOR_NAMES
        .iter()
        .zip(&mask)
        .filter(|(_, m)| **m)
        .map(|(f, _)| f.to_string())
        .collect();
    let x: Vec<Vec<f64>> = chosen
        .iter()
        .map(|r| {
            r.covariates
                .iter()
                .zip(&mask)
                .filter(|(_, m)| **m)
                .map(|(c, _)| c.expect("filtered"))
                .collect()
        })
        .collect();
    let successes: Vec<f64> = chosen.iter().map(|r| r.successes).collect();
    let trials: Vec<f64> = chosen.iter().map(|r| r.trials).collect();

    let options = FitOptions::with_ridge(config.ridge);
    let fit = fit_binomial(&x, Outcomes::Counts { successes: &successes, trials: &trials }, None, options)?;
    let cis = if config.resamples == 0 {
        Vec::new()
    } else {
        bootstrap_percentile(x.len(), &fit.coefficients, config.level, config.resamples, config.seed, |idx| {
            let xs: Vec<&[f64]> = idx.iter().map(|&i| x[i].as_slice()).collect();
            let s: Vec<f64> = idx.iter().map(|&i| successes[i]).collect();
            let t: Vec<f64> = idx.iter().map(|&i| trials[i]).collect();
            fit_binomial(&xs, Outcomes::Counts { successes: &s, trials: &t }, None, options)
                .ok()
                .map(|f| f.coefficients)
        })?
    };
    Ok(FactorRegression {
        factors,
        fit,
        cis,
        beliefs: chosen.len(),
        excluded_zero_n,
    })
}
