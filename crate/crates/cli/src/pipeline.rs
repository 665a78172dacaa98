//! In-memory pipeline stages shared by the subcommands.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::BufReader;

use belief_axes::axes::{load_dimension_specs, DimensionSpec, Measure};
use belief_axes::embedding::{read_embeddings, SkippedWord};
use belief_axes::evaluation::{
    belief_factor_regression, belief_ranking_scores, fit_salience, grand_mean, measure_dimension, ranking_inputs,
    salience_accuracy_correlation, select_best_settings, AccuracyOutcome, BeliefRankingScore, DimensionAccuracy,
    FactorRegression, GroupKey, MeasurementRun, ModelViews, RunKey, SalienceResult,
};
use belief_axes::survey::{build_belief_matrix, dimension_summary, load_labeling, load_survey, SurveyDataset};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, Context, Result};
use crate::output::Warning;

pub fn load_models(config: &RunConfig, warnings: &mut Vec<Warning>) -> Result<Vec<ModelViews>> {
    let models: Vec<Result<ModelViews>> = config
        .embeddings
        .par_iter()
        .map(|e| {
            let ctx = || format!("embedding {:?} ({})", e.name, e.path.display());
            let file = File::open(&e.path).map_err(|source| belief_axes::Error::Io {
                path: e.path.clone(),
                source,
            });
            let raw = file
                .and_then(|f| read_embeddings(&e.name, BufReader::new(f), e.format))
                .context(ctx)?;
            ModelViews::new(raw).context(ctx)
        })
        .collect();
    let models = models.into_iter().collect::<Result<Vec<_>>>()?;
    for m in &models {
        let dups = m.raw.duplicates();
        if !dups.is_empty() {
            warnings.push(Warning::new(
                "duplicate-words",
                format!("embedding {}", m.name()),
                format!("{} duplicate words kept at first occurrence: {}", dups.len(), preview(dups)),
            ));
        }
    }
    Ok(models)
}

pub fn load_specs(config: &RunConfig) -> Result<Vec<DimensionSpec>> {
    let mut specs = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, path) in config.dimensions.iter().enumerate() {
        let loaded = load_dimension_specs(path).context(|| format!("dimension file {}", path.display()))?;
        for spec in loaded {
            if !seen.insert((spec.name.clone(), spec.source)) {
                return Err(CliError::Config {
                    field: format!("dimensions[{i}]"),
                    message: format!("dimension {:?} with word set {} is defined twice", spec.name, spec.source),
                });
            }
            specs.push(spec);
        }
    }
    Ok(specs)
}

pub fn load_surveys(config: &RunConfig, warnings: &mut Vec<Warning>) -> Result<Vec<SurveyDataset>> {
    let mut out = Vec::new();
    for s in &config.surveys {
        let mut data = load_survey(&s.path, s.schema).context(|| format!("survey {:?}", s.name))?;
        data.name = s.name.clone();
        if data.se_missing() {
            warnings.push(Warning::new(
                "se-missing",
                format!("survey {}", s.name),
                "no variance information; every unequal pair enters the ranking metric and sd is left out of the factor regression",
            ));
        }
        out.push(data);
    }
    Ok(out)
}

/// Identities to score: the configured list, else every identity in any
/// survey.
pub fn identities(config: &RunConfig, surveys: &[SurveyDataset]) -> Result<Vec<String>> {
    if let Some(path) = &config.identities {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config {
            field: "identities".into(),
            message: format!("{}: {e}", path.display()),
        })?;
        let mut seen = BTreeSet::new();
        return Ok(text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .filter(|l| seen.insert(l.to_string()))
            .map(str::to_owned)
            .collect());
    }
    let all: BTreeSet<&str> = surveys.iter().flat_map(|s| s.identities()).collect();
    if all.is_empty() {
        return Err(CliError::Config {
            field: "identities".into(),
            message: "nothing to score; list surveys or an identities file".into(),
        });
    }
    Ok(all.into_iter().map(str::to_owned).collect())
}

/// A grid cell that could not be measured.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedRun {
    pub key: RunKey,
    /// Survey dimensions the failed spec would have produced.
    pub dimensions: Vec<String>,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Grid {
    pub runs: Vec<MeasurementRun>,
    pub failed: Vec<FailedRun>,
}

fn spec_dimensions(spec: &DimensionSpec) -> Vec<String> {
    match &spec.multiclass {
        Some(mc) => mc.categories.iter().map(|c| c.dimension().to_owned()).collect(),
        None => vec![spec.name.clone()],
    }
}

/// Evaluates every (embedding, dimension spec, measure) cell in parallel.
/// Runs are returned sorted by run key, then label.
pub fn measure_grid(
    models: &[ModelViews],
    specs: &[DimensionSpec],
    measures: &[Measure],
    identities: &[String],
) -> Grid {
    let cells: Vec<(&ModelViews, &DimensionSpec, Measure)> = models
        .iter()
        .flat_map(|m| specs.iter().flat_map(move |s| measures.iter().map(move |&k| (m, s, k))))
        .collect();
    let results: Vec<std::result::Result<Vec<MeasurementRun>, FailedRun>> = cells
        .par_iter()
        .map(|&(model, spec, measure)| {
            measure_dimension(model, spec, measure, identities).map_err(|e| FailedRun {
                key: RunKey {
                    embedding: model.name().to_owned(),
                    dimension: spec.name.clone(),
                    wordset: spec.source,
                    measure,
                },
                dimensions: spec_dimensions(spec),
                reason: e.to_string(),
            })
        })
        .collect();
    let mut grid = Grid::default();
    for r in results {
        match r {
            Ok(runs) => grid.runs.extend(runs),
            Err(f) => grid.failed.push(f),
        }
    }
    grid.runs.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.label.cmp(&b.label)));
    grid.failed.sort_by(|a, b| a.key.cmp(&b.key));
    grid
}

pub fn grid_warnings(grid: &Grid, identities: &[String], warnings: &mut Vec<Warning>) {
    let identities: BTreeSet<&str> = identities.iter().map(String::as_str).collect();
    for f in &grid.failed {
        warnings.push(Warning::new("failed-run", run_context(&f.key), f.reason.clone()));
    }
    // OOV identities are reported once per embedding, missing pole words once
    // per word set.
    let mut oov: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut poles: BTreeMap<(&str, &str, String), BTreeSet<&SkippedWord>> = BTreeMap::new();
    for run in &grid.runs {
        for s in &run.skipped {
            if identities.contains(s.word.as_str()) {
                oov.entry(&run.key.embedding).or_default().insert(&s.word);
            } else {
                poles
                    .entry((&run.key.embedding, &run.label, run.key.wordset.to_string()))
                    .or_default()
                    .insert(s);
            }
        }
    }
    for (embedding, words) in oov {
        let words: Vec<String> = words.into_iter().map(str::to_owned).collect();
        warnings.push(Warning::new(
            "oov-identity",
            format!("embedding {embedding}"),
            format!("{} identities not found: {}", words.len(), preview(&words)),
        ));
    }
    for ((embedding, label, wordset), skipped) in poles {
        let words: Vec<String> = skipped.iter().map(|s| s.word.clone()).collect();
        warnings.push(Warning::new(
            "skipped-pole-words",
            format!("embedding {embedding} dimension {label} word set {wordset}"),
            format!("{} pole words or pairs skipped: {}", words.len(), preview(&words)),
        ));
    }
}

pub fn run_context(key: &RunKey) -> String {
    format!("{}/{}/{}/{}", key.embedding, key.dimension, key.wordset, key.measure)
}

fn preview(words: &[String]) -> String {
    const SHOW: usize = 10;
    let mut s = words.iter().take(SHOW).cloned().collect::<Vec<_>>().join(", ");
    if words.len() > SHOW {
        s.push_str(&format!(", ... ({} more)", words.len() - SHOW));
    }
    s
}

/// Belief-level scores for the best run of one (dataset, dimension) group.
#[derive(Debug, Clone)]
pub struct RankingBlock {
    pub dataset: String,
    pub best: DimensionAccuracy,
    pub label: String,
    /// Sign applied to the run's scores by alignment.
    pub sign: f64,
    pub scores: Vec<BeliefRankingScore>,
}

#[derive(Debug, Clone)]
pub struct Evaluation {
    /// Outcomes with the run label, per dataset in config order.
    pub outcomes: Vec<(AccuracyOutcome, String)>,
    pub best: BTreeMap<GroupKey, std::result::Result<DimensionAccuracy, String>>,
    pub rankings: Vec<RankingBlock>,
    pub factors: Vec<(String, std::result::Result<FactorRegression, String>)>,
    pub grand_means: BTreeMap<String, Option<f64>>,
    pub overall_grand_mean: Option<f64>,
}

pub fn evaluate(grid: &Grid, surveys: &[SurveyDataset], config: &RunConfig, warnings: &mut Vec<Warning>) -> Evaluation {
    let mut outcomes = Vec::new();
    for survey in surveys {
        let dims = survey.dimensions();
        for run in &grid.runs {
            if dims.contains(run.key.dimension.as_str()) {
                outcomes.push((AccuracyOutcome::evaluate(run, survey), run.label.clone()));
            }
        }
        for f in &grid.failed {
            if f.dimensions.iter().any(|d| dims.contains(d.as_str())) {
                outcomes.push((
                    AccuracyOutcome::Degenerate {
                        key: f.key.clone(),
                        dataset: survey.name.clone(),
                        reason: f.reason.clone(),
                    },
                    f.key.dimension.clone(),
                ));
            }
        }
    }
    for (o, _) in &outcomes {
        if let AccuracyOutcome::Degenerate { key, dataset, reason } = o {
            warnings.push(Warning::new(
                "degenerate-accuracy",
                format!("{dataset} {}", run_context(key)),
                reason.clone(),
            ));
        }
    }

    let plain: Vec<AccuracyOutcome> = outcomes.iter().map(|(o, _)| o.clone()).collect();
    let best: BTreeMap<GroupKey, std::result::Result<DimensionAccuracy, String>> = select_best_settings(&plain)
        .into_iter()
        .map(|(k, v)| (k, v.cloned().map_err(|e| e.to_string())))
        .collect();

    let runs: BTreeMap<&RunKey, &MeasurementRun> = grid.runs.iter().map(|r| (&r.key, r)).collect();
    let mut rankings = Vec::new();
    for ((dataset, _), chosen) in &best {
        let Ok(acc) = chosen else { continue };
        let survey = surveys.iter().find(|s| &s.name == dataset).expect("dataset came from the survey list");
        let run = runs[&acc.key];
        let (rows, sign) = ranking_inputs(run, survey, config.sign_align);
        rankings.push(RankingBlock {
            dataset: dataset.clone(),
            best: acc.clone(),
            label: run.label.clone(),
            sign,
            scores: belief_ranking_scores(&run.key.dimension, &rows),
        });
    }

    let mut factors = Vec::new();
    let mut grand_means = BTreeMap::new();
    for survey in surveys {
        let scores: Vec<BeliefRankingScore> = rankings
            .iter()
            .filter(|b| b.dataset == survey.name)
            .flat_map(|b| b.scores.iter().cloned())
            .collect();
        grand_means.insert(survey.name.clone(), grand_mean(&scores));
        let fit = belief_factor_regression(&scores, survey, &config.regression()).map_err(|e| e.to_string());
        match &fit {
            Err(e) => warnings.push(Warning::new(
                "factor-regression-skipped",
                format!("survey {}", survey.name),
                e.clone(),
            )),
            Ok(f) if !f.fit.converged => warnings.push(Warning::new(
                "not-converged",
                format!("factor regression on {}", survey.name),
                format!("stopped after {} iterations", f.fit.iterations),
            )),
            Ok(_) => {}
        }
        factors.push((survey.name.clone(), fit));
    }
    let overall_grand_mean = grand_mean(rankings.iter().flat_map(|b| &b.scores));

    Evaluation {
        outcomes,
        best,
        rankings,
        factors,
        grand_means,
        overall_grand_mean,
    }
}

impl Evaluation {
    /// Best Pearson r per dimension on one dataset.
    pub fn accuracy_by_dimension(&self, dataset: &str) -> BTreeMap<String, f64> {
        self.best
            .iter()
            .filter(|((d, _), _)| d == dataset)
            .filter_map(|((_, dim), acc)| acc.as_ref().ok().map(|a| (dim.clone(), a.pearson_r)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SalienceCorrelations {
    pub importance_vs_accuracy: Option<f64>,
    pub variance_vs_accuracy: Option<f64>,
    pub dimensions: usize,
}

#[derive(Debug, Clone)]
pub struct Salience {
    pub survey: String,
    pub result: SalienceResult,
    pub variance: BTreeMap<String, f64>,
    pub correlations: Option<SalienceCorrelations>,
}

pub fn salience(
    config: &RunConfig,
    surveys: &[SurveyDataset],
    accuracy: Option<&BTreeMap<String, f64>>,
    warnings: &mut Vec<Warning>,
) -> Result<Salience> {
    let labeling_path = config.require_labeling()?;
    let name = config.salience_survey_name().expect("surveys are present");
    let survey = surveys.iter().find(|s| s.name == name).expect("validated survey name");
    let observations = load_labeling(labeling_path).context(|| "labeling data".to_owned())?;
    let matrix = build_belief_matrix(survey).context(|| format!("belief matrix for survey {name}"))?;
    if !matrix.dropped.is_empty() {
        warnings.push(Warning::new(
            "incomplete-identities",
            format!("survey {name}"),
            format!("{} identities lack some dimension and were left out: {}", matrix.dropped.len(), preview(&matrix.dropped)),
        ));
    }
    let result = fit_salience(&observations, &matrix, &config.regression()).context(|| "salience regression".to_owned())?;
    if result.dropped_observations > 0 {
        warnings.push(Warning::new(
            "dropped-observations",
            "salience",
            format!("{} labeling observations name identities outside the belief matrix", result.dropped_observations),
        ));
    }
    for (label, fit) in [("IsA", &result.isa), ("SeenWith", &result.seen_with)] {
        if !fit.converged {
            warnings.push(Warning::new(
                "not-converged",
                format!("salience {label}"),
                format!("stopped after {} iterations", fit.iterations),
            ));
        }
    }

    let mut variance = BTreeMap::new();
    for d in &matrix.dimensions {
        let summary = dimension_summary(survey, d).context(|| format!("survey {name} dimension {d}"))?;
        variance.insert(d.clone(), summary.variance);
    }

    let correlations = accuracy.map(|acc| {
        let mut corr = |label: &str, stat: &BTreeMap<String, f64>| match salience_accuracy_correlation(stat, acc) {
            Ok(r) => Some(r),
            Err(e) => {
                warnings.push(Warning::new("correlation-skipped", label.to_owned(), e.to_string()));
                None
            }
        };
        let importance_vs_accuracy = corr("importance vs accuracy", &result.importance_by_dimension());
        let variance_vs_accuracy = corr("variance vs accuracy", &variance);
        SalienceCorrelations {
            importance_vs_accuracy,
            variance_vs_accuracy,
            dimensions: variance.keys().filter(|d| acc.contains_key(*d)).count(),
        }
    });

    Ok(Salience {
        survey: name.to_owned(),
        result,
        variance,
        correlations,
    })
}
