pub mod cli;
pub mod error;
pub mod estimator;
pub mod filter;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod rounding;
pub mod sweep;
pub mod theory;
pub mod verify;

pub use error::{Error, Result};
