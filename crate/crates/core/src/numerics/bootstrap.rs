//! Seeded percentile bootstrap.
//!
//! Resample `b` draws its indices from a ChaCha8 stream keyed by
//! `(seed, b)`, so results do not depend on how resamples are scheduled
//! across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapCI {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub resamples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statistic {
    Mean,
}

impl Statistic {
    fn apply(self, values: impl Iterator<Item = f64>) -> f64 {
        match self {
            Statistic::Mean => {
                let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
                sum / n as f64
            }
        }
    }
}

/// Percentile interval for a scalar statistic of `values`.
pub fn bootstrap_ci(values: &[f64], statistic: Statistic, level: f64, resamples: usize, seed: u64) -> Result<BootstrapCI> {
    if values.is_empty() {
        return Err(Error::TooFewValues { required: 2, found: 0 });
    }
    let point = statistic.apply(values.iter().copied());
    let cis = bootstrap_percentile(values.len(), &[point], level, resamples, seed, |idx| {
        Some(vec![statistic.apply(idx.iter().map(|&i| values[i]))])
    })?;
    Ok(cis[0])
}

/// Percentile intervals for a vector-valued statistic over `n` observations.
///
/// `statistic` receives the resampled observation indices and may return
/// `None` to discard a resample (for example when a refit fails). `point`
/// holds the statistic on the original sample.
pub fn bootstrap_percentile<F>(
    n: usize,
    point: &[f64],
    level: f64,
    resamples: usize,
    seed: u64,
    statistic: F,
) -> Result<Vec<BootstrapCI>>
where
    F: Fn(&[usize]) -> Option<Vec<f64>> + Sync,
{
    if n < 2 {
        return Err(Error::TooFewValues { required: 2, found: n });
    }
    if resamples < 100 {
        return Err(Error::InvalidInput(format!("need at least 100 resamples, got {resamples}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidInput(format!("confidence level {level} not in (0, 1)")));
    }

    let draws: Vec<Vec<f64>> = (0..resamples)
        .into_par_iter()
        .filter_map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            statistic(&idx).filter(|v| v.len() == point.len() && v.iter().all(|x| x.is_finite()))
        })
        .collect();
    if draws.is_empty() {
        return Err(Error::InvalidInput("every bootstrap resample failed".into()));
    }

    let alpha = (1.0 - level) / 2.0;
    Ok(point
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            let mut column: Vec<f64> = draws.iter().map(|d| d[k]).collect();
            column.sort_by(f64::total_cmp);
            let (lower, upper) = if column[0] == column[column.len() - 1] && column[0] == p {
                (p, p)
            } else {
                (quantile(&column, alpha), quantile(&column, 1.0 - alpha))
            };
            BootstrapCI {
                point: p,
                lower,
                upper,
                level,
                resamples: draws.len(),
                seed,
            }
        })
        .collect())
}

// Linear interpolation between order statistics of a sorted sample.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_sequence_is_degenerate() {
        let ci = bootstrap_ci(&[5.0; 4], Statistic::Mean, 0.95, 200, 1).unwrap();
        assert_eq!((ci.lower, ci.point, ci.upper), (5.0, 5.0, 5.0));
    }

    #[test]
    fn deterministic_for_seed() {
        let v: Vec<f64> = (0..50).map(|i| ((i * 37) % 11) as f64).collect();
        let a = bootstrap_ci(&v, Statistic::Mean, 0.95, 500, 42).unwrap();
        let b = bootstrap_ci(&v, Statistic::Mean, 0.95, 500, 42).unwrap();
        assert_eq!(a, b);
        let c = bootstrap_ci(&v, Statistic::Mean, 0.95, 500, 43).unwrap();
        assert_ne!(a.lower, c.lower);
        assert!(a.lower <= a.point && a.point <= a.upper);
    }

    #[test]
    fn argument_checks() {
        assert!(bootstrap_ci(&[], Statistic::Mean, 0.95, 200, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], Statistic::Mean, 0.95, 50, 0).is_err());
        assert!(bootstrap_ci(&[1.0, 2.0], Statistic::Mean, 1.0, 200, 0).is_err());
    }

    #[test]
    fn quantile_interpolates() {
        assert_eq!(quantile(&[0.0, 1.0, 2.0, 3.0], 0.5), 1.5);
        assert_eq!(quantile(&[0.0, 1.0, 2.0, 3.0], 0.0), 0.0);
        assert_eq!(quantile(&[0.0, 1.0, 2.0, 3.0], 1.0), 3.0);
    }
}
