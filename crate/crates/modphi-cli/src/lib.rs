//! Library half of the `modphi` command-line tool: argument definitions,
//! subcommand implementations, the acceptance suite and the output envelope.

pub mod cli;
pub mod commands;
pub mod report;
pub mod suite;
