pub mod bary;
pub mod corpus;
pub mod error;
pub mod exact;
pub mod fan;
pub mod flag;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod okounkov;
pub mod poly;
pub mod polytope;
pub mod threshold;

pub use error::{Error, ErrorKind, Result};
