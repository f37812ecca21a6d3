//! Batch front end for the bubble toolkit: table reproduction, sweeps and statistics.

pub mod cli;
pub mod golden;
pub mod stats;
pub mod sweep;
pub mod tables;
