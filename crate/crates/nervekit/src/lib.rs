//! File formats, report rendering and the command-line front end for `nervekit-core`.

pub mod cli;
pub mod files;
pub mod output;
pub mod system;
