//! Skipped-steps 5/3 lifting DWT codec laboratory.

pub mod bench;
pub mod coding;
pub mod config;
pub mod container;
pub mod corpus;
mod counters;
pub mod imageio;
mod par;
pub use par::is_parallel;
pub mod rdls;
pub mod search;
pub mod transform;

pub use config::{Configuration, Mode};
pub use container::{compress, decompress, CompressConfig, Compressed, ContainerError};
pub use counters::CostCounters;
pub use imageio::{read_pgm, write_pgm, ImageError, SampleGrid};
