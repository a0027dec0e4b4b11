//! Instance files, reports, and the command implementations behind the
//! `famcover` binary.

pub mod commands;
pub mod io;
