//! Library surface of the `fairdist` command-line tool, exposed so the
//! pipeline can be driven and tested programmatically.

pub mod bundle;
pub mod commands;
pub mod config;
