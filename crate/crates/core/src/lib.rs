pub mod channel;
pub mod design;
pub mod error;
pub mod harness;
pub mod link;
pub mod mpa;
pub mod polar;
pub mod rng;
pub mod schemes;
pub mod scma;
pub mod validate;

pub use error::{Error, Result};
