use crate::error::{Error, Result};

use super::measure::Measure;
use super::spec::{DimensionSpec, Pole};

/// Reduces a multiclass dimension to binary specs, one per category.
///
/// Pair-based measures pair each category (left) with the default category
/// (right); the default category is paired with the designated contrast.
/// Swinger and Garg measure each category against the union of all others.
/// Every resulting spec is named after the category's survey dimension and
/// treats its left pole (the category) as the high end.
pub fn resolve_multiclass(spec: &DimensionSpec, measure: Measure) -> Result<Vec<DimensionSpec>> {
    let mc = spec
        .multiclass
        .as_ref()
        .ok_or_else(|| Error::NotMulticlass(spec.name.clone()))?;
    let find = |name: &str| {
        mc.category(name).ok_or_else(|| Error::UnknownCategory {
            dimension: spec.name.clone(),
            category: name.to_owned(),
        })
    };
    let default = find(&mc.default)?;
    let contrast = find(&mc.contrast)?;

    let binary = |left: Vec<String>, right: Vec<String>, dimension: &str, label: String| DimensionSpec {
        name: dimension.to_owned(),
        source: spec.source,
        left_words: left,
        right_words: right,
        paired: None,
        multiclass: None,
        high_pole: Pole::Left,
        label: Some(label),
    };

    Ok(mc
        .categories
        .iter()
        .map(|cat| {
            if measure.natively_multiclass() {
                let rest: Vec<String> = mc
                    .categories
                    .iter()
                    .filter(|c| c.name != cat.name)
                    .flat_map(|c| c.words.iter().cloned())
                    .collect();
                binary(cat.words.clone(), rest, cat.dimension(), format!("{}-vs-rest", cat.name))
            } else {
                let other = if cat.name == default.name { contrast } else { default };
                binary(
                    cat.words.clone(),
                    other.words.clone(),
                    cat.dimension(),
                    format!("{}-vs-{}", cat.name, other.name),
                )
            }
        })
        .collect())
}
