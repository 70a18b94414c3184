pub mod cartan;
pub mod components;
pub mod encoding;
pub mod error;
pub mod groups;
pub mod numerics;
pub mod obstruction;
pub mod paths;
pub mod selftest;
pub mod surfaces;

pub use error::{Error, Result};
