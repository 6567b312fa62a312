//! Exact verification kernel for q-deformed operator identities realized on
//! truncated multi-mode Fock spaces.

pub mod scalar;
pub mod fock;
pub mod gens;
pub mod dsl;
pub mod verify;
