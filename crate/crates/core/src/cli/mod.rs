//! Problem-file language, check runner and reports.

pub mod adhoc;
pub mod lexer;
pub mod parser;

pub use parser::{parse, Check, NamedVector, ProblemFile, VectorKind};
pub mod run;

pub use run::{run, Report, RunOptions, Verdict};
