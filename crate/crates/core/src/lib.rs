//! Finite ordinal-word automata with limit transitions, a first-order
//! decision procedure for ordinal-automatic presentations below `ω^ω`, and
//! growth-rate tooling for distinguishability arguments.

pub mod automaton;
pub mod cli;
pub mod error;
pub mod examples;
pub mod gapcode;
pub mod growth;
pub mod logic;
pub mod ordinal;
pub mod relation;
pub mod semantics;
pub mod word;

pub use automaton::{AutomatonBuilder, OrdinalAutomaton};
pub use error::{Error, Result};
pub use ordinal::Ordinal;
pub use relation::{Relation, State, StateSet};
pub use word::{AlphaWord, Alphabet, Symbol};
