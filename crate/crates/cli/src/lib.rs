//! Command-line pipeline: measure identities along semantic axes in one or
//! more embeddings, evaluate the measurements against survey data, and
//! estimate how salient each dimension is in identity labeling.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod pipeline;

pub use commands::{cmd_all, cmd_evaluate, cmd_measure, cmd_salience, Report};
pub use config::{Overrides, RunConfig};
pub use error::{CliError, Result};
