//! Subcommands. Each validates what it needs from the config, runs the
//! pipeline, and writes its report files into the output directory.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use belief_axes::evaluation::{AccuracyOutcome, MeasurementRun};
use belief_axes::survey::SurveyDataset;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{file_stem, num, opt_num, OutputDir, Provenance, Warning};
use crate::pipeline::{self, Evaluation, FailedRun, Grid, Salience};

/// What a command produced.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub output_dir: PathBuf,
    /// Files written, relative to `output_dir`, in write order.
    pub files: Vec<PathBuf>,
    pub warnings: Vec<Warning>,
}

fn open_output(config: &RunConfig) -> Result<OutputDir> {
    OutputDir::create(&config.output_dir, Provenance::new(&config.config_hash, config.seed))
}

fn finish(config: &RunConfig, mut out: OutputDir, command: &str, warnings: Vec<Warning>) -> Result<Report> {
    out.write_warnings(command, &warnings)?;
    Ok(Report {
        output_dir: config.output_dir.clone(),
        files: out.written().to_vec(),
        warnings,
    })
}

struct Measured {
    surveys: Vec<SurveyDataset>,
    identities: Vec<String>,
    grid: Grid,
}

fn measure_stage(config: &RunConfig, warnings: &mut Vec<Warning>) -> Result<Measured> {
    config.require_embeddings()?;
    let specs = pipeline::load_specs(config)?;
    let surveys = pipeline::load_surveys(config, warnings)?;
    let identities = pipeline::identities(config, &surveys)?;
    let models = pipeline::load_models(config, warnings)?;
    let grid = pipeline::measure_grid(&models, &specs, &config.measures, &identities);
    pipeline::grid_warnings(&grid, &identities, warnings);
    Ok(Measured {
        surveys,
        identities,
        grid,
    })
}

pub fn cmd_measure(config: &RunConfig) -> Result<Report> {
    let mut warnings = Vec::new();
    let measured = measure_stage(config, &mut warnings)?;
    let mut out = open_output(config)?;
    write_scores(&mut out, &measured.grid, measured.identities.len())?;
    finish(config, out, "measure", warnings)
}

pub fn cmd_evaluate(config: &RunConfig) -> Result<Report> {
    config.require_surveys()?;
    let mut warnings = Vec::new();
    let measured = measure_stage(config, &mut warnings)?;
    let evaluation = pipeline::evaluate(&measured.grid, &measured.surveys, config, &mut warnings);
    let mut out = open_output(config)?;
    write_evaluation(&mut out, config, &measured, &evaluation)?;
    finish(config, out, "evaluate", warnings)
}

pub fn cmd_salience(config: &RunConfig) -> Result<Report> {
    config.require_labeling()?;
    let mut warnings = Vec::new();
    let surveys = pipeline::load_surveys(config, &mut warnings)?;
    let accuracy = match &config.evaluation_report {
        Some(path) => Some(read_best_settings(path, config.salience_survey_name().expect("surveys present"))?),
        None => None,
    };
    let salience = pipeline::salience(config, &surveys, accuracy.as_ref(), &mut warnings)?;
    let mut out = open_output(config)?;
    write_salience(&mut out, &salience)?;
    finish(config, out, "salience", warnings)
}

/// Measure, evaluate, and (when labeling data is configured) salience, all
/// from one pass over the inputs.
pub fn cmd_all(config: &RunConfig) -> Result<Report> {
    config.require_surveys()?;
    let mut warnings = Vec::new();
    let measured = measure_stage(config, &mut warnings)?;
    let evaluation = pipeline::evaluate(&measured.grid, &measured.surveys, config, &mut warnings);
    let salience = match config.labeling {
        Some(_) => {
            let name = config.salience_survey_name().expect("surveys present");
            let accuracy = evaluation.accuracy_by_dimension(name);
            Some(pipeline::salience(config, &measured.surveys, Some(&accuracy), &mut warnings)?)
        }
        None => None,
    };
    let mut out = open_output(config)?;
    write_scores(&mut out, &measured.grid, measured.identities.len())?;
    write_evaluation(&mut out, config, &measured, &evaluation)?;
    if let Some(s) = &salience {
        write_salience(&mut out, s)?;
    }
    finish(config, out, "all", warnings)
}

fn score_file(run: &MeasurementRun) -> String {
    format!(
        "scores/{}/{}.csv",
        file_stem(&[&run.key.embedding]),
        file_stem(&[&run.label, run.key.wordset.as_str(), run.key.measure.id()])
    )
}

#[derive(Serialize)]
struct ManifestRun<'a> {
    embedding: &'a str,
    dimension: &'a str,
    label: &'a str,
    wordset: &'a str,
    measure: &'a str,
    file: String,
    scored: usize,
    skipped: &'a [belief_axes::embedding::SkippedWord],
}

#[derive(Serialize)]
struct Manifest<'a> {
    identities_requested: usize,
    runs: Vec<ManifestRun<'a>>,
    failed: &'a [FailedRun],
}

fn write_scores(out: &mut OutputDir, grid: &Grid, identities_requested: usize) -> Result<()> {
    let mut manifest = Manifest {
        identities_requested,
        runs: Vec::new(),
        failed: &grid.failed,
    };
    for run in &grid.runs {
        let file = score_file(run);
        out.write_csv(
            &file,
            &["identity", "score"],
            run.scores.iter().map(|(id, s)| vec![id.clone(), num(*s)]),
        )?;
        manifest.runs.push(ManifestRun {
            embedding: &run.key.embedding,
            dimension: &run.key.dimension,
            label: &run.label,
            wordset: run.key.wordset.as_str(),
            measure: run.key.measure.id(),
            file,
            scored: run.scores.len(),
            skipped: &run.skipped,
        });
    }
    out.write_json("manifest.json", &manifest)
}

#[derive(Serialize)]
struct DatasetSummary {
    schema: String,
    se_missing: bool,
    grand_mean_accuracy: Option<f64>,
    beliefs_scored: usize,
    gated_pairs: usize,
    dimensions_with_valid_run: usize,
    dimensions_without_valid_run: Vec<String>,
}

#[derive(Serialize)]
struct Summary {
    sign_align: bool,
    measures: Vec<&'static str>,
    runs: usize,
    failed_runs: usize,
    degenerate_accuracies: usize,
    overall_grand_mean_accuracy: Option<f64>,
    datasets: BTreeMap<String, DatasetSummary>,
}

fn write_evaluation(out: &mut OutputDir, config: &RunConfig, measured: &Measured, eval: &Evaluation) -> Result<()> {
    let key_cols = |k: &belief_axes::evaluation::RunKey, label: &str| {
        vec![
            k.embedding.clone(),
            k.dimension.clone(),
            label.to_owned(),
            k.wordset.to_string(),
            k.measure.to_string(),
        ]
    };

    let rows = eval.outcomes.iter().map(|(o, label)| {
        let mut row = vec![o.dataset().to_owned()];
        row.extend(key_cols(o.key(), label));
        row.push("pearson_r".into());
        match o {
            AccuracyOutcome::Valid(a) => row.extend([num(a.pearson_r), a.n_identities.to_string(), "ok".into(), String::new()]),
            AccuracyOutcome::Degenerate { reason, .. } => {
                row.extend([String::new(), String::new(), "degenerate".into(), reason.clone()])
            }
        }
        row
    });
    out.write_csv(
        "dimension_accuracy.csv",
        &[
            "dataset", "embedding", "dimension", "label", "wordset", "measure", "metric", "value", "n_identities",
            "status", "reason",
        ],
        rows,
    )?;

    let labels: BTreeMap<&belief_axes::evaluation::RunKey, &str> =
        measured.grid.runs.iter().map(|r| (&r.key, r.label.as_str())).collect();
    let rows = eval.best.iter().map(|((dataset, dimension), chosen)| match chosen {
        Ok(a) => {
            let mut row = vec![dataset.clone()];
            row.extend(key_cols(&a.key, labels.get(&a.key).copied().unwrap_or(dimension)));
            row.extend([num(a.pearson_r), a.n_identities.to_string(), "ok".into()]);
            row
        }
        Err(e) => vec![
            dataset.clone(),
            String::new(),
            dimension.clone(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            format!("no valid run: {e}"),
        ],
    });
    out.write_csv(
        "best_settings.csv",
        &["dataset", "embedding", "dimension", "label", "wordset", "measure", "pearson_r", "n_identities", "status"],
        rows,
    )?;

    let rows = eval.rankings.iter().flat_map(|block| {
        block.scores.iter().map(move |s| {
            let mut row = vec![block.dataset.clone(), s.identity.clone()];
            row.extend(key_cols(&block.best.key, &block.label));
            row.extend([
                num(block.sign),
                s.n.to_string(),
                s.n_correct.to_string(),
                opt_num(s.accuracy),
            ]);
            row
        })
    });
    out.write_csv(
        "belief_ranking.csv",
        &[
            "dataset", "identity", "embedding", "dimension", "label", "wordset", "measure", "aligned_sign", "n",
            "n_correct", "accuracy",
        ],
        rows,
    )?;

    let mut rows = Vec::new();
    for (dataset, fit) in &eval.factors {
        match fit {
            Ok(f) => {
                let common = [f.beliefs.to_string(), f.excluded_zero_n.to_string(), f.fit.converged.to_string()];
                let mut push = |term: &str, coef: f64, ci: Option<&belief_axes::numerics::BootstrapCI>| {
                    let mut row = vec![dataset.clone(), term.to_owned(), num(coef)];
                    row.push(opt_num(ci.map(|c| c.lower)));
                    row.push(opt_num(ci.map(|c| c.upper)));
                    row.extend(common.iter().cloned());
                    row.push(String::new());
                    rows.push(row);
                };
                push("intercept", f.fit.intercept, None);
                for (i, name) in f.factors.iter().enumerate() {
                    push(name, f.fit.coefficients[i], f.cis.get(i));
                }
            }
            Err(e) => rows.push(vec![
                dataset.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                e.clone(),
            ]),
        }
    }
    out.write_csv(
        "factor_regression.csv",
        &["dataset", "term", "coefficient", "ci_lower", "ci_upper", "beliefs", "excluded_zero_n", "converged", "error"],
        rows,
    )?;

    let mut datasets = BTreeMap::new();
    for survey in &measured.surveys {
        let blocks: Vec<_> = eval.rankings.iter().filter(|b| b.dataset == survey.name).collect();
        let missing: Vec<String> = eval
            .best
            .iter()
            .filter(|((d, _), chosen)| d == &survey.name && chosen.is_err())
            .map(|((_, dim), _)| dim.clone())
            .collect();
        datasets.insert(
            survey.name.clone(),
            DatasetSummary {
                schema: survey.config.schema.to_string(),
                se_missing: survey.se_missing(),
                grand_mean_accuracy: eval.grand_means.get(&survey.name).copied().flatten(),
                beliefs_scored: blocks.iter().map(|b| b.scores.iter().filter(|s| s.n > 0).count()).sum(),
                gated_pairs: blocks.iter().flat_map(|b| &b.scores).map(|s| s.n).sum(),
                dimensions_with_valid_run: blocks.len(),
                dimensions_without_valid_run: missing,
            },
        );
    }
    let summary = Summary {
        sign_align: config.sign_align,
        measures: config.measures.iter().map(|m| m.id()).collect(),
        runs: measured.grid.runs.len(),
        failed_runs: measured.grid.failed.len(),
        degenerate_accuracies: eval
            .outcomes
            .iter()
            .filter(|(o, _)| matches!(o, AccuracyOutcome::Degenerate { .. }))
            .count(),
        overall_grand_mean_accuracy: eval.overall_grand_mean,
        datasets,
    };
    out.write_json("summary.json", &summary)
}

#[derive(Serialize)]
struct SalienceSummary<'a> {
    survey: &'a str,
    isa_observations: usize,
    seen_with_observations: usize,
    dropped_observations: usize,
    isa_intercept: f64,
    seen_with_intercept: f64,
    isa_converged: bool,
    seen_with_converged: bool,
    variance: &'a BTreeMap<String, f64>,
    correlations: Option<&'a pipeline::SalienceCorrelations>,
}

fn write_salience(out: &mut OutputDir, s: &Salience) -> Result<()> {
    let r = &s.result;
    let ci = |cis: &[belief_axes::numerics::BootstrapCI], i: usize| {
        [opt_num(cis.get(i).map(|c| c.lower)), opt_num(cis.get(i).map(|c| c.upper))]
    };
    let rows = r.dimensions.iter().enumerate().map(|(i, d)| {
        let mut row = vec![d.clone(), num(r.isa.coefficients[i])];
        row.extend(ci(&r.isa_ci, i));
        row.push(num(r.seen_with.coefficients[i]));
        row.extend(ci(&r.seen_with_ci, i));
        row.push(num(r.importance[i]));
        row.push(num(s.variance[d]));
        row
    });
    out.write_csv(
        "salience.csv",
        &[
            "dimension", "isa", "isa_ci_lower", "isa_ci_upper", "seen_with", "seen_with_ci_lower",
            "seen_with_ci_upper", "importance", "survey_variance",
        ],
        rows,
    )?;
    out.write_json(
        "salience_summary.json",
        &SalienceSummary {
            survey: &s.survey,
            isa_observations: r.isa_observations,
            seen_with_observations: r.seen_with_observations,
            dropped_observations: r.dropped_observations,
            isa_intercept: r.isa.intercept,
            seen_with_intercept: r.seen_with.intercept,
            isa_converged: r.isa.converged,
            seen_with_converged: r.seen_with.converged,
            variance: &s.variance,
            correlations: s.correlations.as_ref(),
        },
    )
}

#[derive(Deserialize)]
struct BestRow {
    dataset: String,
    dimension: String,
    pearson_r: Option<f64>,
}

/// Per-dimension accuracy for one dataset from a `best_settings.csv`.
fn read_best_settings(path: &Path, dataset: &str) -> Result<BTreeMap<String, f64>> {
    let bad = |message: String| CliError::Config {
        field: "evaluation_report".into(),
        message,
    };
    let file = File::open(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(file);
    let mut out = BTreeMap::new();
    for row in rdr.deserialize::<BestRow>() {
        let row = row.map_err(|e| bad(format!("{}: {e}", path.display())))?;
        if row.dataset == dataset {
            if let Some(r) = row.pearson_r {
                out.insert(row.dimension, r);
            }
        }
    }
    if out.is_empty() {
        return Err(bad(format!("{} has no valid rows for dataset {dataset:?}", path.display())));
    }
    Ok(out)
}
