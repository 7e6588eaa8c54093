//! Exact all-terminal reliability polynomials of complete graphs and their one-point
//! unions, with exact inflection counting on `(0, 1)`.

pub mod analysis;
pub mod cli;
pub mod complete;
pub mod error;
pub mod graphs;
pub mod poly;
pub mod verify;

pub use error::{Error, Result};
