//! Library side of the `h2ror` command-line tool: model ingestion, run
//! orchestration, reports and plot data.

pub mod config;
pub mod error;
pub mod model;
pub mod mtx;
pub mod report;
pub mod run;

pub use config::{Args, Command, FileConfig, Settings};
pub use error::{CliError, Result};
pub use model::{load_model, ModelSource, RomSource};
pub use report::{emit_plot_data, RunReport};
pub use run::{run, summary};
