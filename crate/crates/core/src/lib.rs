pub mod analytic;
pub mod cli;
pub mod error;
pub mod meandim;
pub mod ridge;
pub mod sampling;
pub mod special;

pub use error::{Error, Result};
