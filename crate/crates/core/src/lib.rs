//! A desk-scale laboratory for random and planted k-SAT.
//!
//! The crate is organised bottom-up:
//!
//! - [`formula`]: literals, clauses, formulas, assignments and clause evaluation.
//! - [`stream`]: reproducible, label-derived random streams.
//! - [`distributions`]: exact samplers for `R(n,k,m)`, `P(n,k,m,σ)`, `P(n,k,m)` and `R⁺(n,k,m)`.
//! - [`solvers`]: Simple-PPZ, its repetition driver, uniform sampling, trial budgets and
//!   the random k-SAT dispatch solver.
//! - [`analysis`]: good/critical variables and the closed-form quantities around them.
//! - [`oracle`]: exhaustive SAT decision, model counting and formula enumeration.
//! - [`harness`]: DIMACS, experiment configs, CSV records and the scripted experiments.

pub mod analysis;
pub mod distributions;
pub mod error;
pub mod formula;
pub mod harness;
pub mod oracle;
pub mod solvers;
pub mod stream;

pub use error::{Error, Result};
pub use formula::{
    clause_status, eval_formula, validate_formula, Assignment, Clause, ClauseStatus, Formula,
    FormulaViolation, Lit, PartialAssignment, Valuation, ViolationKind,
};
pub use stream::RandomStream;
