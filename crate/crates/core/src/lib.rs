pub mod causal;
pub mod cli;
pub mod error;
pub mod implication;
pub mod model;
pub mod phenomenon;
pub mod polytope;
pub mod properties;
pub mod quantum;
pub mod scalar;
pub mod sampling;
pub mod scenario;

pub use error::{Error, Result};
