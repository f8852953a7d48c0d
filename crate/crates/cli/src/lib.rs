//! File format, command-line interface and table reproduction for
//! `conceptspace-core`.

pub mod cli;
pub mod error;
pub mod exec;
pub mod output;
pub mod space_file;
pub mod tables;

pub use error::CliError;
pub use space_file::{Registry, FRUIT_SPACE};
