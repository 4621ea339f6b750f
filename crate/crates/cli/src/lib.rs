//! Command-line front end for Whittaker smoothing: CSV ingestion with gap
//! handling, fixed or automatically selected λ, diagnostics output and the
//! simulation benchmark.

pub mod args;
pub mod error;
pub mod ingest;
pub mod output;
pub mod run;

pub use args::Cli;
pub use error::{CliError, IngestError};
pub use run::{run, Outcome, RunConfig};
