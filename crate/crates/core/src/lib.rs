//! Measure where identity words sit along semantic axes of a word-embedding
//! space, and score those measurements against survey belief data.

pub mod axes;
pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod numerics;
pub mod survey;

pub use error::{Error, Result};
