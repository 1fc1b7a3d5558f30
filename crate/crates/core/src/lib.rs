//! Exact formal calculus, Zhu algebras and induced modules for
//! weight-truncated vertex operator algebras.

pub mod error;
pub mod exact;
pub mod induction;
pub mod io;
pub mod linear;
pub mod report;
pub mod residue;
pub mod vertex;
pub mod zhu;

pub use error::{Error, ParseError, Result};
