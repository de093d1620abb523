//! Exact tangle calculus, planar diagram rewriting and enumeration.
pub mod diagram;
pub mod enumerate;
pub mod experiments;
pub mod frac;
pub mod graphdeduce;

pub use diagram::{DiagramError, LaurentPoly, LinkId, SimplifyMode, TangleDiagram};
pub use enumerate::{Category, EnumerationReport};
pub use experiments::{ExperimentSystem, SolutionReport, TwistSolution, VerificationReport};
pub use frac::{FracError, Fraction, Sign, TorusLinkParam, TwoBridgeLink};
pub use graphdeduce::{Fact, FactBase, ProofTrace};
