//! File formats and command drivers behind the `implicitize` binary.

pub mod format;
pub mod run;
