//! Knot Floer homology of twist families: pair a pattern's type A structure
//! with the built-in type D structure of the 1/m-framed solid torus, extract
//! bigraded invariants, and cross-check dimensions against an immersed-curve
//! oracle.

pub mod algebra;
pub mod box_tensor;
pub mod cli;
pub mod curves;
pub mod error;
pub mod f2;
pub mod grading;
pub mod invariants;
pub mod sweep;
pub mod type_a;
pub mod type_d;

pub use error::{Error, Result};
