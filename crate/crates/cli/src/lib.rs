//! Experiment drivers: problem generators, configuration, and CSV products.

pub mod config;
pub mod generators;
pub mod experiment;
pub mod bench;
