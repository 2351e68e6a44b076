//! File formats, published table data and the command-line front end for
//! [`dnacode_core`].

pub mod cli;
pub mod codefile;
pub mod error;
pub mod records;
pub mod tables;

pub use error::{CliError, Result};
