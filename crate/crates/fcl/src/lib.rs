//! Parser, printer, and Mamdani inference engine for the Fuzzy Control
//! Language subset used by agent knowledge bases.
//!
//! Supported grammar: `FUNCTION_BLOCK` with REAL `VAR_INPUT`/`VAR_OUTPUT`
//! declarations, `FUZZIFY` blocks with piecewise-linear `TERM` point lists,
//! `DEFUZZIFY` blocks with `METHOD : COG`, `DEFAULT`, and `RANGE`, and
//! `RULEBLOCK`s with MIN/MAX operators and optional rule weights (`WITH`).
//! Keywords are case-insensitive and `//` starts a line comment.

pub mod ast;
pub mod corpus;
pub mod engine;
pub mod error;
mod lexer;
mod parser;
mod printer;

pub use ast::{
    Consequent, DefuzzMethod, DefuzzifyBlock, Expr, FuzzifyBlock, FuzzyProgram, LinguisticTerm,
    Rule, RuleBlock, VariableDecl,
};
pub use engine::{defuzzify_cog, evaluate, evaluate_aggregates, membership, Aggregate};
pub use error::{EvalError, FclError};
pub use parser::parse_fcl;
pub use printer::print_fcl;
