//! Linear derivations, their step-by-step checker and witness synthesis.

pub mod derivation;
pub mod checker;
pub mod witness;
