//! Text formats for algebra, module and algebra-module definitions.

pub mod sections;

pub use sections::{format_vector_entries, parse_sections, parse_vector, Section};
