use std::fmt;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingModel;
use crate::error::{Error, Result};
use crate::numerics::{dot, norm};

use super::direction::{build_direction, AxisDirection, DirectionMethod};
use super::spec::DimensionSpec;

/// Word-position measurement models. Each fixes both a direction method and
/// a position formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Measure {
    /// Projection `<w, b> / |b|` on the principal-component direction,
    /// unnormalized vectors.
    #[serde(rename = "ethayarajh")]
    Ethayarajh,
    /// Cosine with the mean pair difference.
    #[serde(rename = "kozlowski")]
    Kozlowski,
    /// Cosine with the principal-component direction.
    #[serde(rename = "bolukbasi")]
    Bolukbasi,
    /// Mean cosine to left words minus mean cosine to right words.
    #[serde(rename = "swinger")]
    Swinger,
    /// `|w - right_centroid| - |w - left_centroid|`.
    #[serde(rename = "garg")]
    Garg,
    /// Projection on the centroid difference.
    #[serde(rename = "ethayarajh+garg")]
    EthayarajhGarg,
    /// Projection on the mean pair difference.
    #[serde(rename = "ethayarajh+kozlowski")]
    EthayarajhKozlowski,
}

impl Measure {
    pub const ALL: [Measure; 7] = [
        Measure::Ethayarajh,
        Measure::Kozlowski,
        Measure::Bolukbasi,
        Measure::Swinger,
        Measure::Garg,
        Measure::EthayarajhGarg,
        Measure::EthayarajhKozlowski,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Measure::Ethayarajh => "ethayarajh",
            Measure::Kozlowski => "kozlowski",
            Measure::Bolukbasi => "bolukbasi",
            Measure::Swinger => "swinger",
            Measure::Garg => "garg",
            Measure::EthayarajhGarg => "ethayarajh+garg",
            Measure::EthayarajhKozlowski => "ethayarajh+kozlowski",
        }
    }

    pub fn direction_method(self) -> DirectionMethod {
        match self {
            Measure::Ethayarajh | Measure::Bolukbasi => DirectionMethod::PrincipalComponent,
            Measure::Kozlowski | Measure::EthayarajhKozlowski => DirectionMethod::MeanPairDifference,
            Measure::Garg | Measure::EthayarajhGarg => DirectionMethod::Centroids,
            Measure::Swinger => DirectionMethod::WordSets,
        }
    }

    pub fn requires_normalized(self) -> bool {
        !matches!(
            self,
            Measure::Ethayarajh | Measure::EthayarajhGarg | Measure::EthayarajhKozlowski
        )
    }

    /// Swinger and Garg handle multiclass dimensions one-vs-rest; the rest
    /// pair each category with a default category.
    pub fn natively_multiclass(self) -> bool {
        matches!(self, Measure::Swinger | Measure::Garg)
    }

    /// One-line description of the score's sign, for report headers.
    pub fn sign_convention(self) -> &'static str {
        match self {
            Measure::Garg => "positive when nearer the left centroid than the right",
            Measure::Swinger => "positive when more cosine-similar to left words",
            _ => "positive toward the left pole",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Measure::ALL
            .into_iter()
            .find(|m| m.id() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown measure {s:?}")))
    }
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    dot(a, b) / (norm(a) * norm(b))
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn missing(direction: &AxisDirection, what: &str) -> Error {
    Error::InvalidInput(format!(
        "direction for {:?} built with {:?} has no {what}",
        direction.dimension, direction.method
    ))
}

/// Position of a raw vector `w` along `direction` under `measure`.
pub fn position(measure: Measure, direction: &AxisDirection, w: &[f64]) -> Result<f64> {
    if direction.method != measure.direction_method() {
        return Err(Error::InvalidInput(format!(
            "measure {measure} needs a {:?} direction, got {:?}",
            measure.direction_method(),
            direction.method
        )));
    }
    let value = match measure {
        Measure::Ethayarajh | Measure::EthayarajhGarg | Measure::EthayarajhKozlowski => {
            let b = direction.vector.as_deref().ok_or_else(|| missing(direction, "vector"))?;
            dot(w, b) / norm(b)
        }
        Measure::Kozlowski | Measure::Bolukbasi => {
            let b = direction.vector.as_deref().ok_or_else(|| missing(direction, "vector"))?;
            cosine(w, b)
        }
        Measure::Garg => {
            let bl = direction.left_centroid.as_deref().ok_or_else(|| missing(direction, "left centroid"))?;
            let br = direction.right_centroid.as_deref().ok_or_else(|| missing(direction, "right centroid"))?;
            distance(w, br) - distance(w, bl)
        }
        Measure::Swinger => {
            let avg = |rows: &[Vec<f64>]| rows.iter().map(|p| cosine(w, p)).sum::<f64>() / rows.len() as f64;
            avg(&direction.left_vectors) - avg(&direction.right_vectors)
        }
    };
    if !value.is_finite() {
        return Err(Error::InvalidInput(format!(
            "measure {measure} produced a non-finite score on {:?}",
            direction.dimension
        )));
    }
    Ok(value)
}

fn check_normalization(measure: Measure, model: &EmbeddingModel) -> Result<()> {
    let state = |n: bool| if n { "normalized" } else { "unnormalized" };
    if model.is_normalized() != measure.requires_normalized() {
        return Err(Error::NormalizationMismatch {
            measure: measure.id(),
            expected: state(measure.requires_normalized()),
            found: state(model.is_normalized()),
        });
    }
    Ok(())
}

/// Scores `word` along `direction`. `Ok(None)` means the word is out of
/// vocabulary.
pub fn score(word: &str, measure: Measure, direction: &AxisDirection, model: &EmbeddingModel) -> Result<Option<f64>> {
    check_normalization(measure, model)?;
    match model.lookup(word) {
        Some(w) => position(measure, direction, w.values).map(Some),
        None => Ok(None),
    }
}

/// Mean cosine to the left-pole words minus mean cosine to the right-pole
/// words, in a normalized model.
pub fn swinger_score(word: &str, spec: &DimensionSpec, model: &EmbeddingModel) -> Result<Option<f64>> {
    check_normalization(Measure::Swinger, model)?;
    let direction = build_direction(spec, DirectionMethod::WordSets, model)?;
    score(word, Measure::Swinger, &direction, model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axes::WordsetSource;

    fn direction_with(method: DirectionMethod, vector: Option<Vec<f64>>) -> AxisDirection {
        AxisDirection {
            dimension: "d".into(),
            method,
            vector,
            left_centroid: None,
            right_centroid: None,
            left_vectors: vec![],
            right_vectors: vec![],
            skipped: vec![],
        }
    }

    #[test]
    fn projection_and_cosine() {
        let pc = direction_with(DirectionMethod::PrincipalComponent, Some(vec![1.0, 0.0]));
        assert_eq!(position(Measure::Ethayarajh, &pc, &[2.0, 0.0]).unwrap(), 2.0);
        let mpd = direction_with(DirectionMethod::MeanPairDifference, Some(vec![1.0, 0.0]));
        assert_eq!(position(Measure::Kozlowski, &mpd, &[0.0, 1.0]).unwrap(), 0.0);
        assert!(position(Measure::Kozlowski, &pc, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn garg_symmetric_point() {
        let mut d = direction_with(DirectionMethod::Centroids, Some(vec![2.0, 0.0]));
        d.left_centroid = Some(vec![1.0, 0.0]);
        d.right_centroid = Some(vec![-1.0, 0.0]);
        assert_eq!(position(Measure::Garg, &d, &[0.0, 1.0]).unwrap(), 0.0);
        assert!(position(Measure::Garg, &d, &[0.5, 0.0]).unwrap() > 0.0);
    }

    #[test]
    fn swinger_examples() {
        let m = EmbeddingModel::from_rows("m", vec![("l", vec![1.0, 0.0]), ("r", vec![0.0, 1.0])])
            .unwrap()
            .unit_normalize()
            .unwrap();
        let spec = DimensionSpec::binary("d", WordsetSource::PriorWork, &["l"], &["r"]);
        assert_eq!(swinger_score("l", &spec, &m).unwrap(), Some(1.0));
        assert_eq!(swinger_score("r", &spec, &m).unwrap(), Some(-1.0));
        let d = build_direction(&spec, DirectionMethod::WordSets, &m).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(position(Measure::Swinger, &d, &[s, s]).unwrap().abs() < 1e-15);
        assert_eq!(swinger_score("nobody", &spec, &m).unwrap(), None);
    }

    #[test]
    fn normalization_mismatch() {
        let raw = EmbeddingModel::from_rows("m", vec![("l", vec![1.0, 0.0]), ("r", vec![0.0, 1.0])]).unwrap();
        let spec = DimensionSpec::binary("d", WordsetSource::PriorWork, &["l"], &["r"]);
        assert!(matches!(swinger_score("l", &spec, &raw), Err(Error::NormalizationMismatch { .. })));
        let d = build_direction(&spec, DirectionMethod::PrincipalComponent, &raw).unwrap();
        assert!(score("l", Measure::Ethayarajh, &d, &raw).unwrap().is_some());
        let unit = raw.unit_normalize().unwrap();
        assert!(score("l", Measure::Ethayarajh, &d, &unit).is_err());
    }

    #[test]
    fn measure_ids_round_trip() {
        for m in Measure::ALL {
            assert_eq!(m.id().parse::<Measure>().unwrap(), m);
        }
        assert!("nope".parse::<Measure>().is_err());
    }
}
