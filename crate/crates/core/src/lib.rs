pub mod automorphism;
pub mod bundle;
pub mod chain;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod linalg;
pub mod metric;
pub mod persistence;
pub mod verify;

pub use error::{Error, Result};
