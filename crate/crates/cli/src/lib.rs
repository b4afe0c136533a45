//! Library half of the `refuel` command: config loading, study commands and
//! output rendering.

pub mod config;
pub mod error;
pub mod output;
pub mod study;

pub use config::{load_config, parse_config, ConfigFile, Study, StudyConfig, SweepAxes};
pub use error::CliError;
pub use output::{fmt_g9, Format};
pub use study::{CompareReport, CriticalRow, OptimizeOutput, Pair, SweepRow};
