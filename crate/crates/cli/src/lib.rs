//! Command-line front end: configuration, model I/O, G-code, SVG and reports.

pub mod config;
pub mod error;
pub mod gcode;
pub mod model_io;
pub mod pipeline;
pub mod render;
pub mod report;

pub use error::{CliError, Result};
