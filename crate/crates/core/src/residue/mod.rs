//! Modules over truncated vertex algebras and the residue identities that
//! characterize weak associativity.

mod identities;
mod module;

pub use identities::*;
pub use module::{graded_dims, load_module, ActionKey, ModeOracle, ModuleData};
