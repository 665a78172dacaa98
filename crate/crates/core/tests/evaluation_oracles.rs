mod common;

use std::collections::BTreeMap;

use belief_axes::axes::{Measure, WordsetSource};
use belief_axes::evaluation::{
    belief_factor_regression, belief_ranking_scores, dimension_accuracy, fit_salience, grand_mean, ranking_inputs,
    salience_accuracy_correlation, salience_features, BeliefRankingScore, MeasurementRun, RegressionConfig, RunKey,
};
use belief_axes::survey::{
    build_belief_matrix, dimension_summary, BeliefStats, LabelingObservation, QuestionType, SurveyDataset, SurveySchema,
};
use common::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn stats(dimension: &str, identity: &str, mean: f64, se: f64) -> BeliefStats {
    BeliefStats {
        identity: identity.to_owned(),
        dimension: dimension.to_owned(),
        mean,
        sd: se * 10.0,
        n: 100,
        se,
        se_missing: false,
        log_frequency: None,
        synsets: None,
    }
}

fn survey(rows: impl IntoIterator<Item = BeliefStats>) -> SurveyDataset {
    SurveyDataset::from_stats("synthetic", SurveySchema::ThisPaper.into(), rows)
}

fn run(dimension: &str, scores: Vec<(String, f64)>) -> MeasurementRun {
    MeasurementRun {
        key: RunKey {
            embedding: "e".into(),
            dimension: dimension.into(),
            wordset: WordsetSource::SurveyMatched,
            measure: Measure::Kozlowski,
        },
        label: dimension.into(),
        scores,
        skipped: vec![],
    }
}

fn name(i: usize) -> String {
    format!("id{i:03}")
}

fn no_bootstrap(ridge: f64) -> RegressionConfig {
    RegressionConfig {
        ridge,
        resamples: 0,
        ..RegressionConfig::default()
    }
}

struct RankingInstance {
    means: Vec<f64>,
    ses: Vec<f64>,
    scores: Vec<f64>,
}

fn ranking_instance(r: &mut rand_chacha::ChaCha8Rng) -> RankingInstance {
    let n = r.random_range(2..=50);
    let means: Vec<f64> = (0..n).map(|_| r.random_range(0.0..1.0)).collect();
    let ses: Vec<f64> = (0..n).map(|_| r.random_range(0.0..0.1)).collect();
    // coarse scores so that ties occur
    let scores: Vec<f64> = means
        .iter()
        .map(|m| ((m + r.random_range(-0.3..0.3)) * 8.0).round())
        .collect();
    RankingInstance { means, ses, scores }
}

fn library_ranking(inst: &RankingInstance, scores: &[f64]) -> Vec<BeliefRankingScore> {
    let s = survey((0..inst.means.len()).map(|i| stats("d", &name(i), inst.means[i], inst.ses[i])));
    let rn = run("d", scores.iter().enumerate().map(|(i, v)| (name(i), *v)).collect());
    let (rows, _) = ranking_inputs(&rn, &s, false);
    belief_ranking_scores("d", &rows)
}

#[test]
fn ranking_matches_pairwise_oracle() {
    let mut r = rng(31);
    for _ in 0..200 {
        let inst = ranking_instance(&mut r);
        let got = library_ranking(&inst, &inst.scores);
        let want = pairwise_ranking_oracle(&inst.means, &inst.ses, &inst.scores);
        for (g, w) in got.iter().zip(&want) {
            assert_eq!((g.n, g.n_correct), (w.n, w.n_correct));
        }
    }
}

#[test]
fn ranking_invariant_under_increasing_transforms() {
    let mut r = rng(32);
    for _ in 0..100 {
        let inst = ranking_instance(&mut r);
        let base = library_ranking(&inst, &inst.scores);
        let exp: Vec<f64> = inst.scores.iter().map(|s| (s / 4.0).exp()).collect();
        let affine: Vec<f64> = inst.scores.iter().map(|s| 3.5 * s - 2.0).collect();
        let ranked: Vec<f64> = {
            // dense ranks keep ties tied
            let mut distinct = inst.scores.clone();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            inst.scores
                .iter()
                .map(|s| distinct.iter().position(|d| d == s).unwrap() as f64)
                .collect()
        };
        for t in [exp, affine, ranked] {
            assert_eq!(library_ranking(&inst, &t), base);
        }
    }
}

#[test]
fn grand_mean_is_weighted_mean_of_accuracies() {
    let mut r = rng(33);
    for _ in 0..50 {
        let inst = ranking_instance(&mut r);
        let scores = library_ranking(&inst, &inst.scores);
        let total_n: usize = scores.iter().map(|s| s.n).sum();
        let weighted: f64 = scores.iter().filter_map(|s| s.accuracy.map(|a| a * s.n as f64)).sum();
        match grand_mean(&scores) {
            Some(g) => assert!((g - weighted / total_n as f64).abs() < 1e-12),
            None => assert_eq!(total_n, 0),
        }
    }
}

#[test]
fn dimension_accuracy_matches_two_pass() {
    let mut r = rng(34);
    for _ in 0..50 {
        let means: Vec<f64> = (0..20).map(|_| r.random_range(0.0..1.0)).collect();
        let scores: Vec<f64> = means.iter().map(|m| m + r.random_range(-0.5..0.5)).collect();
        let s = survey((0..20).map(|i| stats("d", &name(i), means[i], 0.01)));
        let rn = run("d", scores.iter().enumerate().map(|(i, v)| (name(i), *v)).collect());
        let acc = dimension_accuracy(&rn, &s).unwrap();
        assert!((acc.pearson_r - two_pass_pearson(&means, &scores)).abs() < 1e-12);

        let negated = run("d", scores.iter().enumerate().map(|(i, v)| (name(i), -v)).collect());
        assert_eq!(dimension_accuracy(&negated, &s).unwrap().pearson_r, -acc.pearson_r);
    }
}

const DIMS: [&str; 3] = ["activity", "evaluation", "potency"];

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Identities with random survey means on three dimensions, and labeling
/// observations whose selection probability falls only with the distance on
/// evaluation.
fn salience_fixture(seed: u64, per_type: usize) -> (SurveyDataset, Vec<LabelingObservation>) {
    let mut r = rng(seed);
    let n = 60;
    let mut rows = Vec::new();
    for i in 0..n {
        for d in DIMS {
            rows.push(stats(d, &name(i), r.random_range(0.0..1.0), 0.01));
        }
    }
    let s = survey(rows);
    let matrix = build_belief_matrix(&s).unwrap();
    let mut obs = Vec::new();
    for qt in [QuestionType::IsA, QuestionType::SeenWith] {
        for _ in 0..per_type {
            let q = r.random_range(0..n);
            let a = r.random_range(0..n);
            let eval_gap = (matrix.get(q, 1) - matrix.get(a, 1)).abs();
            obs.push(LabelingObservation {
                question_type: qt,
                question_identity: name(q),
                answer_identity: name(a),
                selected: r.random::<f64>() < logistic(0.5 - 1.5 * eval_gap),
            });
        }
    }
    (s, obs)
}

#[test]
fn salience_finds_the_driving_dimension() {
    let (s, obs) = salience_fixture(40, 3000);
    let matrix = build_belief_matrix(&s).unwrap();
    assert_eq!(matrix.dimensions, DIMS);
    let config = RegressionConfig {
        resamples: 200,
        ..RegressionConfig::default()
    };
    let result = fit_salience(&obs, &matrix, &config).unwrap();
    for (fit, cis) in [(&result.isa, &result.isa_ci), (&result.seen_with, &result.seen_with_ci)] {
        assert!(fit.coefficients[1] < 0.0);
        assert!(cis[1].upper < 0.0);
        for k in [0, 2] {
            assert!(cis[k].lower <= 0.0 && 0.0 <= cis[k].upper, "dimension {k}: {:?}", cis[k]);
        }
    }
    let importance = result.importance_by_dimension();
    let top = importance.iter().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert_eq!(top.0, "evaluation");
    assert_eq!(*top.1, result.isa.coefficients[1].abs().max(result.seen_with.coefficients[1].abs()));
}

#[test]
fn salience_unchanged_by_duplicating_observations() {
    let (s, obs) = salience_fixture(41, 400);
    let matrix = build_belief_matrix(&s).unwrap();
    let doubled: Vec<LabelingObservation> = obs.iter().chain(&obs).cloned().collect();
    let config = no_bootstrap(0.0);
    let a = fit_salience(&obs, &matrix, &config).unwrap();
    let b = fit_salience(&doubled, &matrix, &config).unwrap();
    for (x, y) in a.isa.coefficients.iter().zip(&b.isa.coefficients) {
        assert!((x - y).abs() < 1e-8);
    }
    for (x, y) in a.seen_with.coefficients.iter().zip(&b.seen_with.coefficients) {
        assert!((x - y).abs() < 1e-8);
    }
}

#[test]
fn salience_matches_irls_oracle() {
    let (s, obs) = salience_fixture(42, 200);
    let matrix = build_belief_matrix(&s).unwrap();
    let result = fit_salience(&obs, &matrix, &no_bootstrap(1e-6)).unwrap();
    let (x, y, dropped) = salience_features(&obs, &matrix, QuestionType::IsA);
    assert_eq!((x.len(), dropped), (200, 0));
    let ones = vec![1.0; y.len()];
    let (b0, beta) = irls_oracle(&x, &y, &ones, &ones, 1e-6);
    assert!((result.isa.intercept - b0).abs() < 1e-6);
    for (a, b) in result.isa.coefficients.iter().zip(&beta) {
        assert!((a - b).abs() < 1e-6);
    }
}

#[test]
fn salience_correlation_against_permutations() {
    let mut r = rng(43);
    let dims: Vec<String> = (0..17).map(|i| format!("dim{i:02}")).collect();
    let accuracy: BTreeMap<String, f64> = dims.iter().map(|d| (d.clone(), r.random_range(0.0..1.0))).collect();
    let same = salience_accuracy_correlation(&accuracy, &accuracy).unwrap();
    assert!((same - 1.0).abs() < 1e-12);

    let values: Vec<f64> = accuracy.values().copied().collect();
    let mut total = 0.0;
    for _ in 0..100 {
        let mut shuffled = values.clone();
        shuffled.shuffle(&mut r);
        let importance: BTreeMap<String, f64> = dims.iter().cloned().zip(shuffled.iter().copied()).collect();
        let got = salience_accuracy_correlation(&importance, &accuracy).unwrap();
        assert!((got - two_pass_pearson(&shuffled, &values)).abs() < 1e-12);
        total += got.abs();
    }
    assert!(total / 100.0 < 0.35, "mean |r| {}", total / 100.0);
}

#[test]
fn survey_variance_tracks_accuracy() {
    // dimensions with wider survey spread are measured more accurately when
    // the embedding noise is the same everywhere
    let mut r = rng(44);
    let n = 200;
    let mut rows = Vec::new();
    let mut accuracy = BTreeMap::new();
    for k in 0..10 {
        let dim = format!("dim{k}");
        let spread = 0.02 + 0.01 * k as f64;
        let means: Vec<f64> = gaussian_vec(&mut r, n).iter().map(|z| 0.5 + spread * z).collect();
        let scores: Vec<(String, f64)> = means
            .iter()
            .enumerate()
            .map(|(i, m)| (name(i), m + 0.1 * gaussian_vec(&mut r, 1)[0]))
            .collect();
        let s = survey((0..n).map(|i| stats(&dim, &name(i), means[i], 0.01)));
        accuracy.insert(dim.clone(), dimension_accuracy(&run(&dim, scores), &s).unwrap().pearson_r);
        rows.extend(s.iter().cloned());
    }
    let s = survey(rows);
    let variance: BTreeMap<String, f64> = accuracy
        .keys()
        .map(|d| (d.clone(), dimension_summary(&s, d).unwrap().variance))
        .collect();
    let r = salience_accuracy_correlation(&variance, &accuracy).unwrap();
    assert!(r > 0.9, "r = {r}");
}

/// One dimension of `n` beliefs with full covariates; `n_correct` drawn from
/// `trials` Bernoulli(p(distance)) draws.
fn factor_fixture(
    seed: u64,
    n: usize,
    trials: usize,
    p: impl Fn(f64) -> f64,
) -> (SurveyDataset, Vec<BeliefRankingScore>) {
    let mut r = rng(seed);
    let mut rows = Vec::new();
    for i in 0..n {
        let mut b = stats("d", &name(i), r.random_range(0.0..1.0), r.random_range(0.01..0.05));
        b.log_frequency = Some(r.random_range(2.0..12.0));
        b.synsets = Some(r.random_range(1..10));
        rows.push(b);
    }
    let s = survey(rows);
    let med = dimension_summary(&s, "d").unwrap().median;
    let scores = s
        .iter()
        .map(|b| {
            let prob = p((b.mean - med).abs());
            let n_correct = (0..trials).filter(|_| r.random::<f64>() < prob).count();
            BeliefRankingScore {
                identity: b.identity.clone(),
                dimension: "d".into(),
                n: trials,
                n_correct,
                accuracy: Some(n_correct as f64 / trials as f64),
            }
        })
        .collect();
    (s, scores)
}

#[test]
fn factor_regression_recovers_distance_effect() {
    let (s, scores) = factor_fixture(50, 2000, 20, |d| logistic(4.0 * d));
    let reg = belief_factor_regression(&scores, &s, &no_bootstrap(1e-6)).unwrap();
    assert_eq!(reg.factors, ["sd", "distance_to_median", "log_frequency", "synsets"]);
    let coef = reg.fit.coefficients[1];
    assert!((coef - 4.0).abs() < 0.6, "distance coefficient {coef}");
}

#[test]
fn factor_regression_without_variation() {
    let (s, scores) = factor_fixture(51, 100, 10, |_| 1.0);
    let reg = belief_factor_regression(&scores, &s, &no_bootstrap(1e-2)).unwrap();
    assert!(reg.fit.intercept > 5.0, "intercept {}", reg.fit.intercept);
    for c in &reg.fit.coefficients {
        assert!(c.abs() < 1e-2, "slope {c}");
    }
}

#[test]
fn factor_regression_drops_empty_beliefs() {
    let (s, mut scores) = factor_fixture(52, 60, 8, |d| logistic(1.0 - 2.0 * d));
    let kept = scores.clone();
    for score in scores.iter_mut().step_by(3) {
        score.n = 0;
        score.n_correct = 0;
        score.accuracy = None;
    }
    let filtered: Vec<BeliefRankingScore> = scores.iter().filter(|s| s.n > 0).cloned().collect();
    let config = no_bootstrap(1e-6);
    let with_zero = belief_factor_regression(&scores, &s, &config).unwrap();
    let without = belief_factor_regression(&filtered, &s, &config).unwrap();
    assert_eq!(with_zero.excluded_zero_n, 20);
    assert_eq!(with_zero.fit, without.fit);
    assert_ne!(belief_factor_regression(&kept, &s, &config).unwrap().fit, without.fit);
}
