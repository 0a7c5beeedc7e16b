//! Preconvergences, convergence spaces and limit spaces on finite carriers.

pub mod compactness;
pub mod constructions;
pub mod error;
pub mod filters;
pub mod fixtures;
pub mod function_space;
pub mod io;
pub mod nets;
pub mod search;
pub mod spaces;

pub use error::{Error, Result};
