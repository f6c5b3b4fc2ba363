pub mod cli;
pub mod cohomology;
pub mod graph;
pub mod kforms;
pub mod lie;
pub mod linalg;
pub mod transport;
