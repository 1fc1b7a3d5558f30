//! Weight-truncated vertex algebras, automorphisms and the free boson.

mod algebra;
mod automorphism;
pub mod fock;
mod heisenberg;

pub use algebra::{binom_se, load_algebra, ModeKey, TruncatedVertexAlgebra};
pub use automorphism::{delta, Automorphism};
pub use heisenberg::{build_heisenberg, parity_automorphism};
