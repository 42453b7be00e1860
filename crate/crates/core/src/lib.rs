//! Exact symbolic engine for C-differential operators on jet spaces of
//! evolution equations.

pub mod cdiff;
pub mod cli;
pub mod diffpoly;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod multi;
pub mod poly;
pub mod random;
pub mod rational;
pub mod sampling;
pub mod symbols;
pub mod vanishing;

pub use cdiff::{CDiffEntry, CDiffOperator};
pub use diffpoly::{DiffPoly, JetVar, MultiIndex, Names, Point};
pub use error::{Error, Result};
pub use evolution::{EvolutionEquation, StructureKind};
pub use multi::{MultiCDiffOperator, MultiKey};
pub use rational::Rational;
