//! Compilation of quantifier-free arithmetic into ∀⇒∀ sentences over the
//! constructed plane, and lifting of arithmetic witnesses to falsifying
//! assignments.

mod arith;
mod compile;
mod flatten;
mod lift;

use thiserror::Error;

pub use arith::{parse_arith, ArithFormula, ArithTerm, ArithVar};
pub use compile::{compile, compile_with, render_additive, space_for_dimension, ReductionOutput, VariableManifest};
pub use flatten::{flatten_multiplications, FlattenResult, Triple};
pub use lift::{antecedent_assignment, bounded_nat_sat, head_assignment, lift_witness, sentence_a_seed, sine_aux};

use crate::geometry::GeometryError;
use crate::logic::{LogicError, ParseError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("sort error: {0}")]
    SortError(String),
    #[error("variable {0} is reserved for flattening")]
    ReservedVariable(String),
    #[error("dimension must be at least 2, got {0}")]
    InvalidDimension(usize),
    #[error("invalid witness: {0}")]
    WitnessInvalid(String),
    #[error("tolerance breach at {0}")]
    ToleranceBreach(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
