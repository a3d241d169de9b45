//! File formats, parallel verification and the command-line front end
//! for `mubkit-core`.

pub mod cli;
pub mod format;
pub mod imports;
pub mod parallel;

pub use format::{FormatError, LoadedMubs};
