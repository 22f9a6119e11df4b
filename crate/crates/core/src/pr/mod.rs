//! Primitive-recursion term calculus: well-formed terms, a concrete syntax, and a
//! resource-capped evaluator that runs on an explicit work stack.

mod eval;
mod parse;
mod term;

pub use eval::{eval, EvalError, EvalLimits};
pub use parse::{parse, ParseError};
pub use term::{PrTerm, TermKind, WellFormedError};
