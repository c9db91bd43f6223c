use super::ast::{HistoryFormula, StateFormula};
use crate::model::{AgentSet, GameStructure};
use crate::num::{Exact, Probability};

/// Renders a state formula in the concrete syntax accepted by the parser.
pub fn display_state<P: Probability>(game: &GameStructure<P>, f: &StateFormula) -> String {
    let mut out = String::new();
    state(game, f, true, &mut out);
    out
}

pub fn display_history<P: Probability>(game: &GameStructure<P>, f: &HistoryFormula) -> String {
    let mut out = String::new();
    history(game, f, true, &mut out);
    out
}

fn coalition<P: Probability>(game: &GameStructure<P>, set: AgentSet, out: &mut String) {
    let names: Vec<&str> = set.iter().map(|a| game.agent_name(a)).collect();
    out.push('<');
    out.push_str(&names.join(","));
    out.push('>');
}

fn binary(top: bool, out: &mut String, body: impl FnOnce(&mut String)) {
    if !top {
        out.push('(');
    }
    body(out);
    if !top {
        out.push(')');
    }
}

// `¬(¬a ∧ ¬b)` is printed as a disjunction.
fn as_or(f: &StateFormula) -> Option<(&StateFormula, &StateFormula)> {
    match f {
        StateFormula::Not(inner) => match &**inner {
            StateFormula::And(a, b) => match (&**a, &**b) {
                (StateFormula::Not(a), StateFormula::Not(b)) => Some((a, b)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

fn state<P: Probability>(game: &GameStructure<P>, f: &StateFormula, top: bool, out: &mut String) {
    if let Some((a, b)) = as_or(f) {
        return binary(top, out, |out| {
            state(game, a, false, out);
            out.push_str(" | ");
            state(game, b, false, out);
        });
    }
    match f {
        StateFormula::True => out.push_str("true"),
        StateFormula::Not(inner) if **inner == StateFormula::True => out.push_str("false"),
        StateFormula::Atom(p) => out.push_str(game.prop_name(*p)),
        StateFormula::Not(inner) => {
            out.push('!');
            state(game, inner, false, out);
        }
        StateFormula::And(a, b) => binary(top, out, |out| {
            state(game, a, false, out);
            out.push_str(" & ");
            state(game, b, false, out);
        }),
        StateFormula::Coalition(set, psi) => {
            coalition(game, *set, out);
            out.push('[');
            history(game, psi, true, out);
            out.push(']');
        }
        StateFormula::ProbBound {
            comparison,
            bound,
            coalition: set,
            path,
        } => {
            out.push_str(&format!("P{comparison}{} ", Exact(bound)));
            coalition(game, *set, out);
            out.push('[');
            history(game, path, true, out);
            out.push(']');
        }
        StateFormula::Responsibility {
            kind,
            agent,
            plan,
            outcome,
        } => {
            out.push_str(&format!("{kind}({}; {}; ", game.agent_name(*agent), plan.display(game)));
            history(game, outcome, true, out);
            out.push(')');
        }
    }
}

fn history<P: Probability>(game: &GameStructure<P>, f: &HistoryFormula, top: bool, out: &mut String) {
    match f {
        HistoryFormula::Next(phi) => {
            out.push_str("X ");
            state(game, phi, false, out);
        }
        HistoryFormula::Until(a, k, b) if **a == StateFormula::True => {
            out.push_str(&format!("F<={k} "));
            state(game, b, false, out);
        }
        HistoryFormula::Until(a, k, b) => binary(top, out, |out| {
            state(game, a, false, out);
            out.push_str(&format!(" U<={k} "));
            state(game, b, false, out);
        }),
        HistoryFormula::Not(inner) => match &**inner {
            HistoryFormula::Until(a, k, b) if **a == StateFormula::True && matches!(**b, StateFormula::Not(_)) => {
                let StateFormula::Not(body) = &**b else { unreachable!() };
                out.push_str(&format!("G<={k} "));
                state(game, body, false, out);
            }
            HistoryFormula::And(a, b) => match (&**a, &**b) {
                (HistoryFormula::Not(a), HistoryFormula::Not(b)) => binary(top, out, |out| {
                    history(game, a, false, out);
                    out.push_str(" | ");
                    history(game, b, false, out);
                }),
                _ => {
                    out.push('!');
                    history(game, inner, false, out);
                }
            },
            _ => {
                out.push('!');
                history(game, inner, false, out);
            }
        },
        HistoryFormula::And(a, b) => binary(top, out, |out| {
            history(game, a, false, out);
            out.push_str(" & ");
            history(game, b, false, out);
        }),
    }
}
