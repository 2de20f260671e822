//! A saturation-based first-order theorem prover with equality that supports
//! both classical superposition and a delayed-unification variant where
//! unification steps become calculus-level inferences on negative constraint
//! literals.

pub mod calculus;
pub mod clause;
pub mod gen;
pub mod ground;
pub mod index;
pub mod order;
pub mod saturation;
pub mod term;
pub mod tptp;
pub mod unify;

pub use clause::{Clause, ClauseId, InferenceRecord, Literal, Rule, SelectionStrategy};
pub use order::{Kbo, OrderResult};
pub use saturation::{CalculusMode, SaturationConfig, SaturationResult, SaturationStatus};
pub use term::{Signature, Substitution, Term};
