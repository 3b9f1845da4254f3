//! File formats, bundled datasets and the end-to-end pipeline behind the
//! `modgal` binary.

pub mod dataset;
pub mod pipeline;
pub mod qexpfile;
