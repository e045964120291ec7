//! Front end for `twistmo-core`: a rayon-backed [`Executor`], JSON and CSV
//! report writers, layered run configuration and the `twistmo` subcommands.
//!
//! [`Executor`]: twistmo_core::exec::Executor
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod pool;

pub use error::{CliError, EXIT_CONFIG_INVALID, EXIT_NUMERIC_FAILURE, EXIT_TOO_LARGE};
pub use pool::{resolve_threads, Rayon, THREADS_ENV};
