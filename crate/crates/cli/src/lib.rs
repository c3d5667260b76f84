//! Command-line front end: algebra documents in JSON, one command per
//! invocation, deterministic JSON reports.

pub mod commands;
pub mod document;
pub mod report;
