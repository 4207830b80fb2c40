//! Power circuits: DAG representations of integers that can denote towers of
//! exponentials, with comparison and arithmetic that never expand values.

mod circuit;
mod marking;
mod reduced;
pub mod steps;
pub mod text;

pub use circuit::{tower, PowerCircuit};
pub use marking::{Marking, NodeId};
pub use reduced::{ReducedCircuit, UNIT};

use thiserror::Error;

/// Upper bound on the bit length of any integer materialized from a circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitBudget {
    max_bits: u64,
}

impl BitBudget {
    pub const MIN_BITS: u64 = 64;
    pub const DEFAULT_BITS: u64 = 1 << 20;

    pub fn new(max_bits: u64) -> Result<Self, PcError> {
        if max_bits < Self::MIN_BITS {
            return Err(PcError::BudgetTooSmall { max_bits });
        }
        Ok(BitBudget { max_bits })
    }

    pub fn max_bits(self) -> u64 {
        self.max_bits
    }
}

impl Default for BitBudget {
    fn default() -> Self {
        BitBudget { max_bits: Self::DEFAULT_BITS }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcError {
    #[error("reference to missing node {node}")]
    DanglingNode { node: NodeId },
    #[error("cycle through node {node}")]
    Cycle { node: NodeId },
    #[error("node {node} has a negative exponent")]
    NotIntegral { node: NodeId },
    #[error("exponent is negative")]
    NegativeExponent,
    #[error("division by zero")]
    ZeroDivisor,
    #[error("bit budget of {max_bits} bits exceeded")]
    BudgetExceeded { max_bits: u64 },
    #[error("bit budget must be at least 64 bits, got {max_bits}")]
    BudgetTooSmall { max_bits: u64 },
    #[error("node {node} appears twice in a marking")]
    DuplicateTerm { node: NodeId },
    #[error("node {node} has sign {sign}, expected +1 or -1")]
    BadSign { node: NodeId, sign: i8 },
}
