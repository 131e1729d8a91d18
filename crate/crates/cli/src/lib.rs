//! Batch driver for the mukai-lattice toolkit: JSON documents in, exact
//! reports out.

pub mod error;
pub mod input;
pub mod numbers;
pub mod render;
pub mod run;

pub use error::{exit, CliError};
pub use input::parse_surface_spec;
pub use run::{run_analyze_moduli, run_batch, run_document, Command, RunReport, Status};
