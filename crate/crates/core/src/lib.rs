//! Exact algorithms for the Baumslag group `G1 = <a, b | b a b⁻¹ a = a² b a b⁻¹>`
//! and its base group `BS(1,2)`, built on power circuits, plus seeded
//! experiments on how often random words fall into the base group.

pub mod baumslag;
pub mod bs12;
pub mod generic;
pub mod power_circuit;
pub mod word;

pub use power_circuit::{BitBudget, Marking, NodeId, PcError, PowerCircuit, ReducedCircuit};
