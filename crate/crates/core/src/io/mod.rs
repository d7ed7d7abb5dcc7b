//! Configuration parsing and deterministic file formats.

pub mod angle;
pub mod config;
pub mod csv;
pub mod output;
pub mod pgm;

pub use angle::{parse_angle, parse_angle_list};
pub use config::{ConfigMap, OutputFormat, OutputSpec, RunConfig, SweepConfig};
pub use output::OutputSet;
