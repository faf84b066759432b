//! Belief revision with two-place (Popper) conditional probability over
//! finite possible-world spaces.
//!
//! A state is a stack of exact-rational measures with disjoint supports
//! ([`model::EpistemicState`]). From it the crate derives probability cores
//! ([`cores`]), the supposition operator and conditional acceptance
//! ([`suppose`]), nonmonotonic consequence ([`nmr`]), and an audit harness
//! that checks the revision axioms mechanically ([`audit`]).

pub mod audit;
pub mod cores;
pub mod error;
pub mod fixtures;
pub mod logic;
pub mod model;
pub mod model_file;
pub mod nmr;
pub mod suppose;
pub mod table;

pub use error::{Error, Result};
pub use logic::{
    extension, format_formula, parse_formula, Atom, Formula, Proposition, Universe, World,
};
pub use model::{
    abnormal_state, build_state, from_ranking, is_apriori, is_normal, popper_eval, unconditional,
    EpistemicState, RankMeasure, Weight,
};
