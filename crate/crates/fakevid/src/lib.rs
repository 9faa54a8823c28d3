//! File formats, model documents, run manifests and the `fakevid` command
//! line on top of [`fakevid_core`].

pub mod cli;
pub mod dataset;
pub mod embeddings;
pub mod error;
pub mod lexicons;
pub mod manifest;
pub mod model_file;
pub mod models;
pub mod parallel;
pub mod tables;

pub use error::{Error, Result};
pub use fakevid_core;
