//! Files, parallel drivers and the command-line front end for
//! `plate-flow-core`.

pub mod budget;
pub mod cli;
pub mod drive;
pub mod format;
pub mod input;
