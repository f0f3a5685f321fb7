//! Exact verification of plane curves of Artin–Schreier type carrying two
//! Galois points.
//!
//! The crate builds the curves `y^m = x^q + x` (with `m | q + 1`),
//! `y^{q^r + 1} = x^q + x` and `y^m = x^{q+1} - 1` over finite fields, the
//! automorphism groups and birational maps relating them, the plane
//! embeddings `(f : g : 1)` and certificates that the coordinate vertices
//! are Galois points of the image curves.

pub mod branch;
pub mod constants;
pub mod curve;
pub mod degree;
pub mod embedding;
pub mod error;
pub mod families;
pub mod field;
pub mod function_field;
pub mod group;
pub mod linalg;
pub mod maps;
pub mod poly;
pub mod series;
pub mod suite;

pub use error::{Error, Result};
