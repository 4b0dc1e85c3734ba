//! Exact diagram algebra for the loop expansion of the Kontsevich invariant of
//! knots: Jacobi diagrams and their quotient spaces, the PBW map, the rational
//! Aarhus integral over equivariant linking matrices, and the `sl2` weight
//! system.

pub mod aarhus;
pub mod algebra;
pub mod diagram;
pub mod error;
pub mod linking;
pub mod sl2;
pub mod spaces;
pub mod tables;

pub use error::{Error, Result};
