//! File formats, synthetic treebanks and the `nlcov` command line on top of
//! `nlcov-core`.

pub mod cli;
pub mod conllx;
pub mod error;
pub mod model_file;
pub mod synthetic;
pub mod trace;

pub use crate::error::Error;
