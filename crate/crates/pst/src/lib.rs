//! File formats, run manifests, benchmarking and the `pst` command line on
//! top of [`pst_core`].

pub mod bench;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod manifest;

pub use error::{PstError, Result};
pub use pst_core;
