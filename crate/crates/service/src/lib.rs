//! Command-line, REPL and HTTP front ends for the `xplain-core` engine.

pub mod api;
pub mod cli;
pub mod error;
pub mod http;
pub mod repl;
pub mod session;
