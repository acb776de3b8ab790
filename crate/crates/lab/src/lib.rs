//! Command-line laboratory around `bisph_core`: configuration, seeded
//! corpora, reference oracles, snapshot IO and the acceptance checks.

pub mod acceptance;
pub mod checks;
pub mod cli;
pub mod config;
pub mod corpus;
mod error;
pub mod io;
pub mod oracle;

pub use error::{LabError, Result};
