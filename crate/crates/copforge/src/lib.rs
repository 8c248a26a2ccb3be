//! copforge: a connection tableaux prover toolkit.
//!
//! The crate implements clausal and nonclausal connection proof search over
//! TPTP FOF problems, with a preprocessing pipeline built around consistent
//! ε-Skolemisation, Naive-Bayes and Monte-Carlo-Tree-Search internal
//! guidance, and certification of found proofs by translation to the
//! sequent calculus LK with an independent checker.

pub mod batch;
pub mod gen;
pub mod guidance;
pub mod lk;
pub mod matrix;
pub mod mcps;
pub mod ncmatrix;
pub mod nnf;
pub mod preprocess;
pub mod search;
pub mod skolem;
pub mod symtab;
pub mod term;
pub mod tptp;
pub mod unify;

pub use preprocess::{pipeline, Normal, PreprocOpts, Preprocessed};
pub use tptp::{parse_problem, parse_problem_file, Problem};
