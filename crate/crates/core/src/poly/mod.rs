//! Exact polynomial arithmetic over a [`FieldCtx`](crate::field::FieldCtx).

mod bi;
mod resultant;
mod ternary;
mod uni;

pub use bi::{BiPoly, Var};
pub use resultant::{
    bareiss_det, resultant, resultant_euclid, resultant_generic, squarefree_part, sylvester,
    ExactRing,
};
pub use ternary::{dehomogenize, homogenize, Chart, TernaryForm};
pub use uni::UniPoly;
