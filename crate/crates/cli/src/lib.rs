//! Driver for single solves, window and wavenumber sweeps, Green-function
//! convergence studies and reference generation.

pub mod config;
pub mod output;
mod run;

pub use config::{Mode, RunConfig};
pub use run::{run, RunOptions};
