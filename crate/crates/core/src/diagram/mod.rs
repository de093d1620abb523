//! Planar tangle and link diagrams.

mod bracket;
mod build;
mod identify;
mod linking;
pub(crate) mod model;
pub mod moves;
mod ops;
mod pd;
mod poly;
mod simplify;

use thiserror::Error;

use crate::frac::Fraction;

pub use bracket::{
    bracket_skein, bracket_state_sum, diagram_fraction, fingerprint, jones, kauffman_bracket, tangle_bracket,
};
pub use build::{
    braid_closure, infinity_tangle, rational_tangle, rational_tangle_by, standard_tangle, torus_link, trivial_tangle3,
    zero_tangle, StringSlot, TWIST_HANDEDNESS,
};
pub use identify::{bracket_budget, identify_link, table_collisions, LinkId, DEFAULT_BRACKET_BUDGET, TABLE_MAX_P};
pub use linking::{capped_linking_number, linking_number, pairwise_linking_number};
pub use model::{ComponentInfo, ComponentKind, Crossing, Port, TangleDiagram};
pub use pd::{canonical_code, emit_pd, parse_pd};
pub use poly::LaurentPoly;
pub use simplify::{find_nugatory, simplify, Nugatory, SimplifyMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("rotation system is not planar: V - E + F = {chi}, expected {expected}")]
    NonPlanarCode { chi: i64, expected: i64 },
    #[error("expected {expected} strings, found {found}")]
    WrongStringCount { expected: usize, found: usize },
    #[error("expected {expected} boundary points, found {found}")]
    WrongEndpointCount { expected: usize, found: usize },
    #[error("unknown component label {0:?}")]
    UnknownLabel(String),
    #[error("capping index must be 1, 2 or 3, got {0}")]
    BadCapIndex(u8),
    #[error("diagram has {crossings} crossings, budget is {budget}")]
    BudgetExceeded { crossings: usize, budget: usize },
    #[error("filler {0} is not integral or of the form 1/v")]
    UnsupportedFiller(Fraction),
    #[error("linking number needs two distinct closed components: {0}")]
    BadComponents(String),
    #[error("signed crossing count {0} between the components is odd")]
    OddLinking(i64),
}

pub type Result<T> = std::result::Result<T, DiagramError>;
