//! Grid-diagram knot Floer homology (hat flavor, GF(2) coefficients) and exact
//! Alexander polynomials for twist families of knots.
//!
//! A knot is presented as the closure of a braid word together with a marked
//! band of parallel strands. Inserting `m` full twists on the band produces a
//! family `K_m`; this crate computes graded homology tables and Alexander
//! polynomials along such families and detects how their extremal data
//! stabilizes as `m` grows.

pub mod alexander;
pub mod assignment;
pub mod braids;
pub mod cache;
pub mod cli;
pub mod complex;
pub mod error;
pub mod gf2;
pub mod grid;
pub mod stabilize;

pub use error::{Error, Result};
