//! Explicit-state model checking of strategic abilities under imperfect
//! information.
//!
//! The library evaluates alternating epistemic mu-calculus over concurrent
//! epistemic game structures, including a "steadfast" next-step operator
//! that treats traversal of a coalition's common-knowledge neighborhood as
//! an atomic activity. Formula translations produce sound lower and upper
//! bounds for strategic ability queries; a brute-force checker provides
//! ground truth on small models, and benchmark generators reproduce the
//! counterexample structures, a voting/coercion scenario, and bridge
//! endplays used to evaluate the approximations.

pub mod bench;
pub mod exact;
pub mod experiments;
pub mod fixpoint;
pub mod icgs;
pub mod logic;
pub mod report;
pub mod textfmt;

pub use exact::{check_ir, check_perfect_info, verdict, ExactOptions, Semantics, Verdict, VerdictValue};
pub use fixpoint::{eval, EvalOptions, EvalStats};
pub use icgs::{Model, ModelBuilder, StateSet, UniformAssignment};
pub use logic::Formula;
