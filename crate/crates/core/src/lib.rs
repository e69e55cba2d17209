//! Normed-plane geometry, the additive two-sorted language of normed spaces,
//! and a compiler from quantifier-free arithmetic to ∀⇒∀ sentences of that
//! language.

pub mod geometry;
pub mod harness;
pub mod logic;
pub mod reduction;
pub mod rational;
