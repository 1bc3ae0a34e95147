pub mod certificates;
pub mod cli;
pub mod error;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod rng;
pub mod sdp;
pub mod symlin;
pub mod thresholds;
