//! Belief-level ranking accuracy.
//!
//! For a focal identity `i`, a comparison identity `j` counts toward `N`
//! when the survey places them apart with confidence: `mean_i - se_i >
//! mean_j + se_j` or the mirror case. It counts toward `N_c` when the
//! embedding scores order the pair the same way, strictly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::pearson;
use crate::survey::SurveyDataset;

use super::{paired_with_survey, MeasurementRun};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedIdentity {
    pub identity: String,
    pub mean: f64,
    pub se: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefRankingScore {
    pub identity: String,
    pub dimension: String,
    pub n: usize,
    pub n_correct: usize,
    /// `n_correct / n`; absent when `n == 0`.
    pub accuracy: Option<f64>,
}

fn confidently_above(a: &RankedIdentity, b: &RankedIdentity) -> bool {
    a.mean - a.se > b.mean + b.se
}

// ties in the embedding score count as incorrect
fn reproduces(higher: &RankedIdentity, lower: &RankedIdentity) -> bool {
    higher.score > lower.score
}

/// Joins a run with survey stats. When `align` is set and the run's
/// Pearson correlation with the survey is negative, scores are negated.
/// Returns the joined rows and the sign that was applied.
pub fn ranking_inputs(run: &MeasurementRun, survey: &SurveyDataset, align: bool) -> (Vec<RankedIdentity>, f64) {
    let mut rows: Vec<RankedIdentity> = paired_with_survey(run, survey)
        .map(|(id, score, b)| RankedIdentity {
            identity: id.to_owned(),
            mean: b.mean,
            se: b.se,
            score,
        })
        .collect();
    let mut sign = 1.0;
    if align {
        let means: Vec<f64> = rows.iter().map(|r| r.mean).collect();
        let scores: Vec<f64> = rows.iter().map(|r| r.score).collect();
        if matches!(pearson(&means, &scores), Ok(r) if r < 0.0) {
            sign = -1.0;
            rows.iter_mut().for_each(|r| r.score = -r.score);
        }
    }
    (rows, sign)
}

fn score_one(dimension: &str, focal: &RankedIdentity, rows: &[RankedIdentity]) -> BeliefRankingScore {
    let (mut n, mut n_correct) = (0, 0);
    for other in rows {
        if other.identity == focal.identity {
            continue;
        }
        let (hi, lo) = if confidently_above(focal, other) {
            (focal, other)
        } else if confidently_above(other, focal) {
            (other, focal)
        } else {
            continue;
        };
        n += 1;
        if reproduces(hi, lo) {
            n_correct += 1;
        }
    }
    BeliefRankingScore {
        identity: focal.identity.clone(),
        dimension: dimension.to_owned(),
        n,
        n_correct,
        accuracy: (n > 0).then(|| n_correct as f64 / n as f64),
    }
}

/// Ranking score for every identity in `rows`.
pub fn belief_ranking_scores(dimension: &str, rows: &[RankedIdentity]) -> Vec<BeliefRankingScore> {
    rows.iter().map(|focal| score_one(dimension, focal, rows)).collect()
}

/// Ranking score for one identity of a run.
pub fn belief_ranking_score(
    identity: &str,
    run: &MeasurementRun,
    survey: &SurveyDataset,
    align: bool,
) -> Result<BeliefRankingScore> {
    let (rows, _) = ranking_inputs(run, survey, align);
    let focal = rows
        .iter()
        .find(|r| r.identity == identity)
        .ok_or_else(|| Error::MissingIdentity {
            identity: identity.to_owned(),
            context: format!("run {} joined with survey {}", run.label, survey.name),
        })?;
    Ok(score_one(&run.key.dimension, focal, &rows))
}

/// Pooled accuracy `sum(N_c) / sum(N)`, equal to the N-weighted mean of the
/// per-belief accuracies.
pub fn grand_mean<'a>(scores: impl IntoIterator<Item = &'a BeliefRankingScore>) -> Option<f64> {
    let (c, n) = scores
        .into_iter()
        .fold((0usize, 0usize), |(c, n), s| (c + s.n_correct, n + s.n));
    (n > 0).then(|| c as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluation::tests::{run_from, survey_from};

    fn rows(data: &[(&str, f64, f64, f64)]) -> Vec<RankedIdentity> {
        data.iter()
            .map(|(id, mean, se, score)| RankedIdentity {
                identity: id.to_string(),
                mean: *mean,
                se: *se,
                score: *score,
            })
            .collect()
    }

    #[test]
    fn three_identity_example() {
        let r = rows(&[("A", 0.9, 0.02, 3.0), ("B", 0.5, 0.02, 1.0), ("C", 0.1, 0.02, 2.0)]);
        let s = belief_ranking_scores("d", &r);
        assert_eq!(s[0].accuracy, Some(1.0));
        assert_eq!((s[1].n, s[1].n_correct), (2, 1));
        assert_eq!((s[2].n, s[2].n_correct), (2, 1));
        assert_eq!(grand_mean(&s), Some(4.0 / 6.0));
    }

    #[test]
    fn overlapping_intervals_are_gated_out() {
        let r = rows(&[("A", 0.50, 0.05, 1.0), ("B", 0.52, 0.05, 0.0)]);
        let s = belief_ranking_scores("d", &r);
        assert_eq!(s[0].n, 0);
        assert_eq!(s[0].accuracy, None);
        assert_eq!(grand_mean(&s), None);
    }

    #[test]
    fn ties_are_incorrect() {
        let r = rows(&[("A", 0.9, 0.0, 1.0), ("B", 0.5, 0.0, 1.0), ("C", 0.1, 0.0, 1.0)]);
        for s in belief_ranking_scores("d", &r) {
            assert_eq!((s.n, s.n_correct), (2, 0));
        }
    }

    #[test]
    fn alignment_flips_negative_runs() {
        let survey = survey_from("d", &[("A", 0.9, 0.01), ("B", 0.5, 0.01), ("C", 0.1, 0.01)]);
        let run = run_from("d", &[("A", -3.0), ("B", -1.0), ("C", -2.0)]);
        let (_, sign) = ranking_inputs(&run, &survey, true);
        assert_eq!(sign, -1.0);
        assert_eq!(belief_ranking_score("A", &run, &survey, true).unwrap().accuracy, Some(1.0));
        assert_eq!(belief_ranking_score("A", &run, &survey, false).unwrap().accuracy, Some(0.0));
        assert!(belief_ranking_score("Z", &run, &survey, true).is_err());
    }
}
