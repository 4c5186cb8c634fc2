//! File formats, parallel point counting, reports and the `modparam`
//! command line on top of `modparam-core`.

pub mod cli;
pub mod formats;
pub mod pipeline;
pub mod report;
pub mod selfcheck;
pub mod tables;
