//! Brute-force reference implementations shared by the test suites.

pub mod lm;
pub mod metrics;
pub mod stats;
