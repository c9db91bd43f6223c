//! Probabilistic alternating-time temporal logic over finite histories,
//! extended with responsibility operators.
//!
//! State formulae are decided at a state; history formulae on a finite
//! history. Bounded until is read over the strict future: `φ U≤k φ′` holds
//! on `ρ` when some position `1 ≤ i ≤ k` satisfies `φ′` and every earlier
//! position satisfies `φ`. In particular `U≤0` never holds.

mod ast;
mod eval;
mod parse;
mod print;

pub use ast::{Comparison, Definitions, HistoryFormula, ResponsibilityKind, StateFormula};
pub use eval::{
    check_coalition, check_prob_bound, eval_history, eval_state, optimal_probability, satisfying_language,
    CompiledHistory,
};
pub use parse::{
    parse_history_formula, parse_history_formula_with, parse_outcome_with, parse_plan, parse_state_formula,
    parse_state_formula_with,
};
pub use print::{display_history, display_state};
