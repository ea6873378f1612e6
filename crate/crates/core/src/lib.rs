//! Defeasible deontic logic with compensation chains and conjunctive
//! obligations that are kept free of pragmatic oddity.
//!
//! A theory is parsed with [`dsl::parse_theory`], evaluated with
//! [`engine::Engine`], and its conclusions can be justified by linear
//! derivations checked in [`proof`].

pub mod bench;
pub mod dsl;
pub mod engine;
pub mod gen;
pub mod parallel;
pub mod proof;
pub mod theory;

pub use dsl::{parse_theory, serialize_theory};
pub use engine::{compute_extension, Engine, EngineError, Extension, Verdict};
pub use proof::derivation::{Derivation, TaggedExpression};
pub use theory::{Conjunction, Literal, Rule, Theory};
