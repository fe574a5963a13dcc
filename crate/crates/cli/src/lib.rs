//! Library side of the `zdeep` command-line tool: file formats, table
//! rendering, and the parallel drivers. The binary in `main.rs` is a thin
//! argument-parsing layer over these.

pub mod drivers;
pub mod formats;
