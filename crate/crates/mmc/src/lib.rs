//! File formats, plots and the command-line driver for `mmc-core`.
//!
//! - [`model_file`]: JSON model files.
//! - [`data_file`]: dataset and loss-history CSV.
//! - [`results`]: benchmark and analysis CSV/SVG emission.
//! - [`parallel`]: the 420-movement benchmark on a worker pool.
//! - [`cli`]: the `mmc` binary.

pub mod cli;
pub mod data_file;
mod error;
pub mod model_file;
pub mod parallel;
pub mod results;
pub mod svg;

pub use error::{Error, Result};
