//! The additive two-sorted language of normed spaces: syntax, the
//! abbreviation layer, concrete syntax and tolerance-aware evaluation.

mod ast;
mod eval;
mod gadgets;
mod prenex;
mod sample;
mod syntax;

use thiserror::Error;

pub use ast::{Binder, Formula, MacroUse, ScalarTerm, Sort, VectorTerm};
pub use eval::{eval_qf, eval_scalar, eval_vector, explain_false, Assignment};
pub use gadgets::{Gadgets, PairExpr, VecEqEncoding};
pub use prenex::{
    check_aia_shape, is_prenex_ordered, prenex_variants, quantifier_prefix, universal_form, Quantifier,
};
pub use sample::{eval_bounded, universal_matrix, BoundedOutcome, Sampler};
pub use syntax::{parse_sentence, print_sentence, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("sort error: {0}")]
    SortError(String),
    #[error("variable {name} has dimension {got}, the space has dimension {expected}")]
    Dimension { name: String, expected: usize, got: usize },
    #[error("formula is not quantifier-free")]
    NotQuantifierFree,
    #[error("formula is not closed")]
    NotClosed,
    #[error("formula is not of the form A => B with A, B purely universal")]
    NotAiaShape,
    #[error("unsupported: {0}")]
    Unsupported(String),
}
