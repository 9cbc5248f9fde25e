pub mod combinatorics;
pub mod error;
pub mod fock;
pub mod opalgebra;
pub mod ordering;
pub mod scalar;

pub use error::{Error, Result};
pub mod verify;
