pub mod acceptance;
pub mod chow;
pub mod error;
pub mod fields;
pub mod ksymbols;
pub mod lattice;
pub mod oracles;
pub mod reciprocity;
pub mod sample;

pub use error::{Error, Result};
