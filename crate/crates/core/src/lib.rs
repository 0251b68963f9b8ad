//! Epistemic logic over weighted similarity models.
//!
//! Formulas mix individual knowledge with everyone's, common, distributed
//! and mutual knowledge. Models are graphs whose edges carry sets of
//! epistemic abilities; an agent cannot tell two states apart when all of
//! its abilities appear on the edge between them.
//!
//! The crate provides a parser and printer, model checking (both the
//! textbook recursive definition and a bottom-up truthset algorithm),
//! translations to and from relational models, satisfiability-preserving
//! rewritings with their witness constructions, and a small bounded
//! satisfiability oracle.

pub mod formula;
pub mod gen;

pub mod model;
pub mod rewrite;
pub mod satbench;

pub mod semantics;
pub mod translate;

pub use formula::{parse, parse_open, Agent, Formula, Group, LanguageTag};
pub use model::{KripkeModel, WeightedModel};
