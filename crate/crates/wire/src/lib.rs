//! Configuration, disorder ensembles, data export and the `polwire` command
//! line on top of [`polariton_core`].

pub mod commands;
pub mod config;
pub mod ensemble;
mod error;
pub mod output;
pub mod pipeline;
pub mod report;

pub use error::{Result, WireError};
pub use polariton_core as core;
