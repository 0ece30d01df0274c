//! Command-line front end for the zpsmith library.

pub mod commands;
pub mod error;
pub mod files;
