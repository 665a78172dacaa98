//! Semantic axes: dimension word sets, the directions induced from them, and
//! the word-position measures that score a word along a direction.
//!
//! Sign convention: every raw position score is larger for words closer to
//! the *left* pole. [`DimensionSpec::high_pole`] records which pole the
//! survey scale treats as "high"; the evaluation layer uses it to orient
//! scores before comparing them with survey means.

mod direction;
mod measure;
mod multiclass;
mod spec;

pub use direction::{build_direction, AxisDirection, DirectionMethod};
pub use measure::{position, score, swinger_score, Measure};
pub use multiclass::resolve_multiclass;
pub use spec::{
    load_dimension_specs, parse_dimension_specs, Category, DimensionSpec, MulticlassSpec, Pole,
    WordsetSource,
};
