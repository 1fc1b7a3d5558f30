//! Induced modules: single-mode normal forms, the residue relation
//! submodule, and the quotient with its checks.

mod checks;
mod maps;
mod module;
mod normal;
mod relations;

pub use checks::{
    annihilation_element, check_admissibility, check_confluence, check_embedding, AdmissibilityReport, ConfluenceReport, EmbeddingReport,
};
pub use maps::{induced_map, universal_map, InducedMap, IntertwineReport, UniversalMap};
pub use module::{InduceParams, InducedModule};
pub use normal::{NfEntry, NormalForms, TensorWord};
pub use relations::{close_under_modes, consistency_relations, j_relations, j_relations_at, RelationStats, RelationWindow};
