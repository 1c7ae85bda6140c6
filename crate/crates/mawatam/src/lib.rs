//! File formats, renderers and the command-line front end for `mawatam-core`.
pub mod cli;
pub mod formats;
pub mod render;
