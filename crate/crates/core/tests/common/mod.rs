//! Independent oracles and synthetic fixtures shared by integration tests.
//! Nothing here calls into the library's numerical kernels.
#![allow(dead_code)]

use belief_axes::axes::{DimensionSpec, Pole, WordsetSource};
use belief_axes::embedding::EmbeddingModel;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// Textbook two-pass Pearson correlation.
pub fn two_pass_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..x.len() {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx).powi(2);
        syy += (y[i] - my).powi(2);
    }
    sxy / (sxx * syy).sqrt()
}

/// Leading eigenvector of the centered Gram matrix by power iteration on
/// repeated squares, mapped back to feature space. Converged to a relative
/// residual below 1e-10.
pub fn power_iteration_pc(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let d = rows[0].len();
    let mut c = DMatrix::from_fn(n, d, |i, j| rows[i][j]);
    let means: Vec<f64> = (0..d).map(|j| c.column(j).mean()).collect();
    for j in 0..d {
        for i in 0..n {
            c[(i, j)] -= means[j];
        }
    }
    let gram = &c * c.transpose();
    let mut m = gram.clone();
    for _ in 0..6 {
        m = &m * &m;
        let s = m.norm();
        m /= s;
    }
    let mut v = DVector::from_element(n, 1.0) + DVector::from_fn(n, |i, _| 0.01 * (i as f64 + 1.0).sin());
    v /= v.norm();
    for _ in 0..100_000 {
        let w = &m * &v;
        v = &w / w.norm();
        let gv = &gram * &v;
        let lambda = v.dot(&gv);
        if (&gv - &v * lambda).norm() <= 1e-10 * lambda.abs() {
            break;
        }
    }
    let pc = c.transpose() * v;
    let pc = &pc / pc.norm();
    pc.iter().copied().collect()
}

/// Penalized binomial IRLS in working-response form, solved with LU.
/// Returns `(intercept, slopes)`.
pub fn irls_oracle(
    x: &[Vec<f64>],
    successes: &[f64],
    trials: &[f64],
    weights: &[f64],
    ridge: f64,
) -> (f64, Vec<f64>) {
    let n = x.len();
    let p = x[0].len() + 1;
    let design = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { x[i][j - 1] });
    let mut beta = DVector::zeros(p);
    for _ in 0..500 {
        let eta = &design * &beta;
        let mut wdiag = DVector::zeros(n);
        let mut z = DVector::zeros(n);
        for i in 0..n {
            let mu = 1.0 / (1.0 + (-eta[i]).exp());
            let var = mu * (1.0 - mu);
            wdiag[i] = weights[i] * trials[i] * var;
            z[i] = eta[i] + (successes[i] / trials[i] - mu) / var;
        }
        let mut lhs = DMatrix::zeros(p, p);
        let mut rhs = DVector::zeros(p);
        for i in 0..n {
            let row = design.row(i);
            lhs += wdiag[i] * row.transpose() * row;
            rhs += wdiag[i] * z[i] * row.transpose();
        }
        for k in 1..p {
            lhs[(k, k)] += ridge;
        }
        let next = lhs.lu().solve(&rhs).expect("oracle system solvable");
        let change = (&next - &beta).amax();
        beta = next;
        if change < 1e-13 {
            break;
        }
    }
    (beta[0], beta.iter().skip(1).copied().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleRank {
    pub n: usize,
    pub n_correct: usize,
}

/// Visits every unordered pair once and credits both endpoints.
pub fn pairwise_ranking_oracle(means: &[f64], ses: &[f64], scores: &[f64]) -> Vec<OracleRank> {
    let k = means.len();
    let mut out = vec![OracleRank::default(); k];
    for a in 0..k {
        for b in (a + 1)..k {
            let a_high = means[a] - ses[a] > means[b] + ses[b];
            let b_high = means[b] - ses[b] > means[a] + ses[a];
            if !(a_high || b_high) {
                continue;
            }
            let correct = if a_high { scores[a] > scores[b] } else { scores[b] > scores[a] };
            for idx in [a, b] {
                out[idx].n += 1;
                if correct {
                    out[idx].n_correct += 1;
                }
            }
        }
    }
    out
}

/// Synthetic embedding in which every word is `mu + s * b + eps` with
/// `|eps| <= 0.01`. Left pole words sit at `s = +1`, right pole words at
/// `s = -1`, identities on an evenly spaced grid in `[-0.9, 0.9]`.
pub struct PlantedAxis {
    pub model: EmbeddingModel,
    pub spec: DimensionSpec,
    /// Identity words with their planted positions.
    pub identities: Vec<(String, f64)>,
    pub axis: Vec<f64>,
}

pub fn planted_axis(seed: u64, dim: usize, n_identities: usize, pairs: usize) -> PlantedAxis {
    let mut r = rng(seed);
    let axis = unit(&gaussian_vec(&mut r, dim));
    let raw_mu = gaussian_vec(&mut r, dim);
    let along: f64 = raw_mu.iter().zip(&axis).map(|(a, b)| a * b).sum();
    let mu = unit(&raw_mu.iter().zip(&axis).map(|(m, a)| m - along * a).collect::<Vec<_>>());

    let noise = |r: &mut ChaCha8Rng| {
        let dir = unit(&gaussian_vec(r, dim));
        let len = r.random_range(0.0..0.01);
        dir.into_iter().map(|v| v * len).collect::<Vec<f64>>()
    };
    let word = |r: &mut ChaCha8Rng, s: f64| {
        let e = noise(r);
        (0..dim).map(|k| mu[k] + s * axis[k] + e[k]).collect::<Vec<f64>>()
    };

    let mut rows = Vec::new();
    let mut left = Vec::new();
    let mut right = Vec::new();
    for p in 0..pairs {
        let (l, rt) = (format!("left{p}"), format!("right{p}"));
        rows.push((l.clone(), word(&mut r, 1.0)));
        rows.push((rt.clone(), word(&mut r, -1.0)));
        left.push(l);
        right.push(rt);
    }
    let mut identities = Vec::new();
    for i in 0..n_identities {
        let s = -0.9 + 1.8 * i as f64 / (n_identities - 1) as f64;
        let name = format!("identity{i:02}");
        rows.push((name.clone(), word(&mut r, s)));
        identities.push((name, s));
    }
    let model = EmbeddingModel::from_rows(format!("planted{seed}"), rows).unwrap();
    let spec = DimensionSpec {
        name: "planted".into(),
        source: WordsetSource::PriorWork,
        left_words: left,
        right_words: right,
        paired: None,
        multiclass: None,
        high_pole: Pole::Left,
        label: None,
    };
    PlantedAxis {
        model,
        spec,
        identities,
        axis,
    }
}

/// Ranks with ties broken by position (the inputs here have no ties).
pub fn ranks(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0; values.len()];
    for (rank, i) in idx.into_iter().enumerate() {
        out[i] = rank;
    }
    out
}
