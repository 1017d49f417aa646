//! Exact cohomology computations for toric orbifolds over simple polytopes.
//!
//! Everything is computed with arbitrary-precision integers and rationals.

pub mod linalg;
pub mod serde_big;
pub mod charpair;
pub mod polytope;
pub mod retraction;
pub mod evenness;
pub mod fan;
pub mod poly;
pub mod gradedring;
pub mod towers;
