//! Command-line front end for `spacelike-core`: surface spec files, the
//! analysis pipeline, JSON and CSV reports, and trace export.

pub mod analysis;
pub mod cli;
pub mod export;
pub mod report;
pub mod spec;

pub use cli::run;
