//! Experiment runner, CSV formats and command line for `dpbandit-core`.

pub mod cli;
pub mod experiment;
pub mod io;
