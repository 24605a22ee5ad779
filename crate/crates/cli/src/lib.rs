//! Command-line front end for `fibre-core`: argument parsing, JSON reports, DOT and CSV output.

pub mod commands;
pub mod dot;
pub mod parse;
pub mod report;
