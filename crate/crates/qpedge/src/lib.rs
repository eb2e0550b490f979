//! Text formats, command line and verification suites for `qpedge-core`.

pub mod cli;
pub mod element;
pub mod format;
pub mod gen;
pub mod suites;

pub use format::{parse_qp, print_qp, Diagnostic, QPDocument};
