//! Kripke-frame toolkit and proof search for the strong union logic SU:
//! intuitionistic logic extended with the axiom
//!
//! ```text
//! ((~p -> q) & (~q -> p) -> r | s) -> (p -> r) | (q -> s)
//! ```
//!
//! The crate covers formulas and their syntax, finite S4 frames, monotone
//! semantics, the strong-union frame conditions, Medvedev frames and
//! connected products, an intuitionistic decision procedure and a bounded
//! SU prover, plus the property suites that tie these together.

pub mod constructions;
pub mod error;
pub mod formula;
pub mod frame;
pub mod harness;
pub mod io;
pub mod pointset;
pub mod prover;
pub mod registry;
pub mod semantics;
pub mod strong_union;

pub use error::{Error, Result};
pub use formula::{parse, print, Axiom, Formula, SchemaSubstitution};
pub use frame::Frame;
pub use pointset::PointSet;
pub use semantics::{Model, SearchBounds, Valuation};
