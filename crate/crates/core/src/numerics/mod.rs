//! Statistical and linear-algebra kernels used by the measurement and
//! evaluation layers. Everything here is a pure function over slices.

mod bootstrap;
mod glm;
mod pca;

pub use bootstrap::{bootstrap_ci, bootstrap_percentile, BootstrapCI, Statistic};
pub use glm::{
    fit_binomial, penalized_gradient, penalized_log_likelihood, FitOptions, FitResult, Outcomes,
    DEFAULT_RIDGE,
};
pub use pca::first_principal_component;

use crate::error::{Error, Result};

/// Pearson product-moment correlation.
///
/// Uses a single pass with running co-moments. Fails on length mismatch,
/// fewer than three points, or zero variance on either side.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(Error::TooFewValues {
            required: 3,
            found: x.len(),
        });
    }
    let (mut mx, mut my) = (0.0, 0.0);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (k, (&a, &b)) in x.iter().zip(y).enumerate() {
        let n = (k + 1) as f64;
        let dx = a - mx;
        let dy = b - my;
        mx += dx / n;
        my += dy / n;
        sxx += dx * (a - mx);
        syy += dy * (b - my);
        sxy += dx * (b - my);
    }
    if sxx <= 0.0 {
        return Err(Error::ZeroVariance { which: "x" });
    }
    if syy <= 0.0 {
        return Err(Error::ZeroVariance { which: "y" });
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Sample mean.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample (n - 1) variance. Zero for fewer than two values.
pub fn sample_variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() - 1) as f64
}

/// Median; even lengths take the midpoint of the two central values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len() % 2 == 0 {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    })
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn pearson_examples() {
        assert!((pearson(&[1., 2., 3.], &[2., 4., 6.]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&[1., 2., 3.], &[3., 2., 1.]).unwrap() + 1.0).abs() < 1e-15);
        // cov = 4, var_x = var_y = 5
        assert!((pearson(&[1., 2., 3., 4.], &[1., 3., 2., 4.]).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(pearson(&[1., 2., 3.], &[1., 2.]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(pearson(&[1., 2.], &[1., 2.]), Err(Error::TooFewValues { .. })));
        assert!(matches!(pearson(&[1., 1., 1.], &[1., 2., 3.]), Err(Error::ZeroVariance { which: "x" })));
        assert!(matches!(pearson(&[1., 2., 3.], &[4., 4., 4.]), Err(Error::ZeroVariance { which: "y" })));
    }

    #[test]
    fn summaries() {
        assert_eq!(median(&[0.1, 0.2, 0.9, 1.0]), Some(0.55));
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[]), None);
        assert!((sample_variance(&[0.0, 0.5, 1.0]) - 0.25).abs() < 1e-15);
    }

    fn pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (3usize..40).prop_flat_map(|n| {
            (
                proptest::collection::vec(-100.0f64..100.0, n),
                proptest::collection::vec(-100.0f64..100.0, n),
            )
        })
    }

    proptest! {
        #[test]
        fn pearson_symmetric_and_affine((x, y) in pair(), a in 0.1f64..10.0, b in -50.0f64..50.0) {
            prop_assume!(sample_variance(&x) > 1e-6 && sample_variance(&y) > 1e-6);
            let r = pearson(&x, &y).unwrap();
            prop_assert!((-1.0..=1.0).contains(&r));
            prop_assert!((pearson(&y, &x).unwrap() - r).abs() < 1e-12);
            let pos: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let neg: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
            prop_assert!((pearson(&pos, &y).unwrap() - r).abs() < 1e-12);
            prop_assert!((pearson(&neg, &y).unwrap() + r).abs() < 1e-12);
        }
    }
}
