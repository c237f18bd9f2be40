//! Explainable answer-set programming.
//!
//! The pipeline is: [`parser::parse_program`] → [`ground::ground`] →
//! [`stable::enumerate_answer_sets`], with explanation layers on top:
//!
//! * [`justify`]: justification graphs for why an atom is in or out of an
//!   answer set, with aggregate literals explained by [`aggregate`] witnesses;
//! * [`contrast`]: contrastive explanations over minimally perturbed fact
//!   bases, and abduction of minimal hypothesis sets;
//! * [`inconsistency`]: minimal inconsistent and minimal correction subsets
//!   of designated soft facts.

pub mod aggregate;
pub mod ast;
pub mod contrast;
pub mod desugar;
pub mod error;
pub mod ground;
pub mod inconsistency;
pub mod interp;
pub mod justify;
pub mod parser;
pub mod stable;
pub mod testing;

pub use ast::{pretty_print, Atom, Program, Rule};
pub use error::Error;
pub use ground::{ground, GroundProgram};
pub use interp::{AtomId, Interpretation};
pub use parser::parse_program;
