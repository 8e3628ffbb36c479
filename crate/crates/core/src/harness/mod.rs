//! Batch runs, trace export, summaries and the verification oracle.

pub mod export;
pub mod oracle;
pub mod run;
pub mod summary;

pub use export::{csv_header, trace_from_json, trace_to_csv, trace_to_json};
pub use oracle::{oracle_expectimax, Oracle};
pub use run::{run, RunManifest, RunReport};
pub use summary::{summarize, SummaryRow};
