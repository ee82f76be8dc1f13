//! File formats, command-line front end and verification suite for
//! [`cstar_core`].

pub mod acceptance;
pub mod analyze;
pub mod channel;
pub mod check;
pub mod error;
pub mod format;
pub mod verify;

pub use error::CliError;
