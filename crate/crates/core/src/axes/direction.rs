use log::warn;
use serde::{Deserialize, Serialize};

use crate::embedding::{EmbeddingModel, SkippedWord};
use crate::error::{Error, Result};
use crate::numerics::{dot, first_principal_component, norm};

use super::spec::DimensionSpec;

const MIN_NORM: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionMethod {
    /// Average of `left_i - right_i` over word pairs.
    MeanPairDifference,
    /// First principal component of the pair-centered pole words.
    PrincipalComponent,
    /// Per-pole centroids; the vector is `left_centroid - right_centroid`.
    Centroids,
    /// No vector, only the resolved pole word vectors.
    WordSets,
}

/// A direction induced from one dimension's word sets in one model.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisDirection {
    pub dimension: String,
    pub method: DirectionMethod,
    pub vector: Option<Vec<f64>>,
    pub left_centroid: Option<Vec<f64>>,
    pub right_centroid: Option<Vec<f64>>,
    pub left_vectors: Vec<Vec<f64>>,
    pub right_vectors: Vec<Vec<f64>>,
    pub skipped: Vec<SkippedWord>,
}

impl AxisDirection {
    fn empty(spec: &DimensionSpec, method: DirectionMethod) -> Self {
        AxisDirection {
            dimension: spec.name.clone(),
            method,
            vector: None,
            left_centroid: None,
            right_centroid: None,
            left_vectors: Vec::new(),
            right_vectors: Vec::new(),
            skipped: Vec::new(),
        }
    }
}

fn resolve_pole(
    words: &[String],
    model: &EmbeddingModel,
    skipped: &mut Vec<SkippedWord>,
) -> Vec<Vec<f64>> {
    words
        .iter()
        .filter_map(|w| match model.lookup(w) {
            Some(v) => Some(v.values.to_vec()),
            None => {
                skipped.push(SkippedWord::oov(w));
                None
            }
        })
        .collect()
}

fn pairs_of(spec: &DimensionSpec) -> Vec<(String, String)> {
    if let Some(p) = &spec.paired {
        return p.clone();
    }
    if spec.left_words.len() != spec.right_words.len() {
        warn!(
            "dimension {:?}: poles have {} and {} words; pairing by index after truncation",
            spec.name,
            spec.left_words.len(),
            spec.right_words.len()
        );
    }
    spec.left_words
        .iter()
        .cloned()
        .zip(spec.right_words.iter().cloned())
        .collect()
}

fn resolve_pairs(
    spec: &DimensionSpec,
    model: &EmbeddingModel,
    skipped: &mut Vec<SkippedWord>,
) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    let mut out = Vec::new();
    for (l, r) in pairs_of(spec) {
        let lv = model.lookup(&l);
        let rv = model.lookup(&r);
        match (lv, rv) {
            (Some(lv), Some(rv)) => out.push((lv.values.to_vec(), rv.values.to_vec())),
            (lv, rv) => {
                if lv.is_none() {
                    skipped.push(SkippedWord::oov(&l));
                }
                if rv.is_none() {
                    skipped.push(SkippedWord::oov(&r));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyPole {
            dimension: spec.name.clone(),
            pole: "paired",
        });
    }
    Ok(out)
}

fn average<'a>(rows: impl IntoIterator<Item = &'a [f64]>, dim: usize) -> Vec<f64> {
    let mut acc = vec![0.0; dim];
    let mut n = 0usize;
    for r in rows {
        for (a, v) in acc.iter_mut().zip(r) {
            *a += v;
        }
        n += 1;
    }
    acc.iter_mut().for_each(|a| *a /= n as f64);
    acc
}

fn checked(spec: &DimensionSpec, v: Vec<f64>) -> Result<Vec<f64>> {
    let len = norm(&v);
    if !(len >= MIN_NORM) || !len.is_finite() {
        return Err(Error::DegenerateDirection {
            dimension: spec.name.clone(),
            norm: len,
        });
    }
    Ok(v)
}

/// Induces an axis from `spec` in `model`.
///
/// Paired methods use explicit pairs when given, otherwise the pole lists
/// are paired by index after truncating to the shorter one; pairs with an
/// out-of-vocabulary member are dropped and recorded in `skipped`.
pub fn build_direction(
    spec: &DimensionSpec,
    method: DirectionMethod,
    model: &EmbeddingModel,
) -> Result<AxisDirection> {
    let dim = model.dim();
    let mut out = AxisDirection::empty(spec, method);
    match method {
        DirectionMethod::MeanPairDifference => {
            let pairs = resolve_pairs(spec, model, &mut out.skipped)?;
            let diffs: Vec<Vec<f64>> = pairs
                .iter()
                .map(|(l, r)| l.iter().zip(r).map(|(a, b)| a - b).collect())
                .collect();
            let v = average(diffs.iter().map(Vec::as_slice), dim);
            out.vector = Some(checked(spec, v)?);
            out.left_vectors = pairs.iter().map(|p| p.0.clone()).collect();
            out.right_vectors = pairs.into_iter().map(|p| p.1).collect();
        }
        DirectionMethod::PrincipalComponent => {
            let pairs = resolve_pairs(spec, model, &mut out.skipped)?;
            // each pair centered on its own mean contributes +-(l - r)/2
            let mut rows = Vec::with_capacity(2 * pairs.len());
            for (l, r) in &pairs {
                let half: Vec<f64> = l.iter().zip(r).map(|(a, b)| (a - b) / 2.0).collect();
                rows.push(half.iter().map(|v| -v).collect::<Vec<f64>>());
                rows.push(half);
            }
            let mut v = first_principal_component(&rows).map_err(|_| Error::DegenerateDirection {
                dimension: spec.name.clone(),
                norm: 0.0,
            })?;
            let mean_proj = |side: &mut dyn Iterator<Item = &Vec<f64>>| {
                let (s, n) = side.fold((0.0, 0usize), |(s, n), w| (s + dot(w, &v), n + 1));
                s / n as f64
            };
            let left = mean_proj(&mut pairs.iter().map(|p| &p.0));
            let right = mean_proj(&mut pairs.iter().map(|p| &p.1));
            if left < right {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            out.vector = Some(v);
            out.left_vectors = pairs.iter().map(|p| p.0.clone()).collect();
            out.right_vectors = pairs.into_iter().map(|p| p.1).collect();
        }
        DirectionMethod::Centroids | DirectionMethod::WordSets => {
            let left = resolve_pole(&spec.left_words, model, &mut out.skipped);
            let right = resolve_pole(&spec.right_words, model, &mut out.skipped);
            for (pole, rows) in [("left", &left), ("right", &right)] {
                if rows.is_empty() {
                    return Err(Error::EmptyPole {
                        dimension: spec.name.clone(),
                        pole,
                    });
                }
            }
            if method == DirectionMethod::Centroids {
                let bl = average(left.iter().map(Vec::as_slice), dim);
                let br = average(right.iter().map(Vec::as_slice), dim);
                let diff = bl.iter().zip(&br).map(|(a, b)| a - b).collect();
                out.vector = Some(checked(spec, diff)?);
                out.left_centroid = Some(bl);
                out.right_centroid = Some(br);
            }
            out.left_vectors = left;
            out.right_vectors = right;
        }
    }
    Ok(out)
}
