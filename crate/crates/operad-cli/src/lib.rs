//! Library surface of the command-line driver, exposed for the test
//! suites; the binary in `main.rs` is a thin wrapper.

pub mod json;
pub mod report;
