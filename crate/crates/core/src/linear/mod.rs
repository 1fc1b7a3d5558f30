//! Exact linear algebra over the rationals for graded spaces.

mod echelon;
mod space;
mod subspace;
mod vector;

pub use echelon::Echelon;
pub use space::{BasisElement, GradedSpace};
pub use subspace::{intersect, kernel, quotient, span_close, Quotient, Subspace};
pub use vector::{GradedVector, Matrix, Vector};
