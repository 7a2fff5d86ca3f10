//! Command-line driver for `fraclap-core`: problem files, built-in examples
//! and CSV output.

pub mod config;
pub mod examples;
pub mod exec;
pub mod expr;
pub mod output;
pub mod regions;
pub mod run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Solver(#[from] fraclap_core::Error),
    #[error(transparent)]
    Parse(#[from] expr::ParseError),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
