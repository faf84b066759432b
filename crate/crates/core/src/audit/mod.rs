//! Model generation and axiom auditing.

mod axioms;
mod generator;
mod report;

pub use axioms::*;
pub use generator::{
    enumerate_states, ordered_partitions, random_propositions, random_state, small_universe,
    GeneratorParams,
};
pub use report::{AuditReport, AxiomResult, Failure};
