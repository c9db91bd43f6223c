use std::collections::HashMap;
use std::ops::ControlFlow;

use super::ast::{Comparison, HistoryFormula, StateFormula};
use crate::error::{Error, Result};
use crate::measures::MeasuredLanguage;
use crate::model::{walk_histories, AgentSet, GameStructure, History, JointId, PlanClass, StateId};
use crate::num::{Probability, Rational};

/// A history formula whose state subformulae have been decided once per
/// state, so that evaluating it on a history only inspects truth tables.
#[derive(Debug, Clone)]
pub struct CompiledHistory {
    tables: Vec<Vec<bool>>,
    root: Node,
    horizon: usize,
}

#[derive(Debug, Clone)]
enum Node {
    Next(usize),
    Until(usize, usize, usize),
    Not(Box<Node>),
    And(Box<Node>, Box<Node>),
}

impl CompiledHistory {
    pub fn compile<P: Probability>(game: &GameStructure<P>, psi: &HistoryFormula) -> Result<Self> {
        let mut tables = Vec::new();
        let mut index = HashMap::new();
        let root = compile_node(game, psi, &mut tables, &mut index)?;
        Ok(CompiledHistory {
            tables,
            root,
            horizon: psi.horizon(),
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// Evaluates on the state sequence `state(0), state(1), …`.
    pub fn eval_with(&self, state: impl Fn(usize) -> StateId) -> bool {
        self.eval_node(&self.root, &state)
    }

    pub fn eval(&self, history: &History) -> Result<bool> {
        if history.len() < self.horizon {
            return Err(Error::HistoryTooShort {
                length: history.len(),
                horizon: self.horizon,
            });
        }
        Ok(self.eval_with(|i| history.state(i)))
    }

    fn eval_node(&self, node: &Node, state: &impl Fn(usize) -> StateId) -> bool {
        match node {
            Node::Next(t) => self.tables[*t][state(1).0],
            Node::Until(a, k, b) => {
                // Strict future: the witness position is 1..=k; every earlier
                // position, the start included, must satisfy the left operand.
                for i in 1..=*k {
                    if !self.tables[*a][state(i - 1).0] {
                        return false;
                    }
                    if self.tables[*b][state(i).0] {
                        return true;
                    }
                }
                false
            }
            Node::Not(inner) => !self.eval_node(inner, state),
            Node::And(l, r) => self.eval_node(l, state) && self.eval_node(r, state),
        }
    }
}

fn compile_node<P: Probability>(
    game: &GameStructure<P>,
    psi: &HistoryFormula,
    tables: &mut Vec<Vec<bool>>,
    index: &mut HashMap<StateFormula, usize>,
) -> Result<Node> {
    let mut table = |phi: &StateFormula| -> Result<usize> {
        if let Some(&i) = index.get(phi) {
            return Ok(i);
        }
        let row = (0..game.state_count())
            .map(|s| eval_state(game, StateId(s), phi))
            .collect::<Result<Vec<bool>>>()?;
        tables.push(row);
        index.insert(phi.clone(), tables.len() - 1);
        Ok(tables.len() - 1)
    };
    Ok(match psi {
        HistoryFormula::Next(phi) => Node::Next(table(phi)?),
        HistoryFormula::Until(a, k, b) => {
            let a = table(a)?;
            let b = table(b)?;
            Node::Until(a, *k, b)
        }
        HistoryFormula::Not(inner) => Node::Not(Box::new(compile_node(game, inner, tables, index)?)),
        HistoryFormula::And(l, r) => {
            let l = compile_node(game, l, tables, index)?;
            let r = compile_node(game, r, tables, index)?;
            Node::And(Box::new(l), Box::new(r))
        }
    })
}

/// `s ⊨ φ`.
pub fn eval_state<P: Probability>(game: &GameStructure<P>, s: StateId, phi: &StateFormula) -> Result<bool> {
    game.check_state(s)?;
    Ok(match phi {
        StateFormula::True => true,
        StateFormula::Atom(p) => {
            if p.0 >= game.propositions().len() {
                return Err(Error::unknown("proposition", format!("#{}", p.0)));
            }
            game.holds(s, *p)
        }
        StateFormula::Not(f) => !eval_state(game, s, f)?,
        StateFormula::And(a, b) => eval_state(game, s, a)? && eval_state(game, s, b)?,
        StateFormula::Coalition(set, psi) => check_coalition(game, s, *set, psi)?,
        StateFormula::ProbBound {
            comparison,
            bound,
            coalition,
            path,
        } => check_prob_bound(game, s, *coalition, path, *comparison, bound)?,
        StateFormula::Responsibility {
            kind,
            agent,
            plan,
            outcome,
        } => crate::responsibility::check(game, s, *kind, *agent, plan, outcome)?,
    })
}

/// `ρ ⊨ ψ`; the history must be at least as long as the formula's horizon.
pub fn eval_history<P: Probability>(game: &GameStructure<P>, history: &History, psi: &HistoryFormula) -> Result<bool> {
    CompiledHistory::compile(game, psi)?.eval(history)
}

/// `s ⊨ ⟨A⟩[ψ]`: some deterministic history-dependent strategy of the
/// coalition makes every consistent history satisfy ψ.
pub fn check_coalition<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    coalition: AgentSet,
    psi: &HistoryFormula,
) -> Result<bool> {
    game.check_state(s)?;
    let compiled = CompiledHistory::compile(game, psi)?;
    let groups = game.joint_groups(coalition);
    let mut path = vec![s];
    enforce(game, &compiled, &groups, &mut path)
}

fn enforce<P: Probability>(
    game: &GameStructure<P>,
    psi: &CompiledHistory,
    groups: &[Vec<JointId>],
    path: &mut Vec<StateId>,
) -> Result<bool> {
    if path.len() > psi.horizon() {
        return Ok(psi.eval_with(|i| path[i]));
    }
    let current = *path.last().unwrap();
    'choice: for group in groups {
        for &joint in group {
            for (target, _) in game.successors(current, joint)? {
                path.push(*target);
                let ok = enforce(game, psi, groups, path)?;
                path.pop();
                if !ok {
                    continue 'choice;
                }
            }
        }
        return Ok(true);
    }
    Ok(false)
}

/// Optimal probability of ψ that the coalition can achieve from `s`, with the
/// other agents following the base profile. Maximizes when `maximize` is set.
pub fn optimal_probability<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    coalition: AgentSet,
    psi: &HistoryFormula,
    maximize: bool,
) -> Result<P> {
    game.check_state(s)?;
    let compiled = CompiledHistory::compile(game, psi)?;
    let groups: Vec<Vec<(JointId, P)>> = game
        .joint_groups(coalition)
        .into_iter()
        .map(|g| g.into_iter().map(|j| (j, game.opponent_weight(j, coalition))).collect())
        .collect();
    let mut path = vec![s];
    induct(game, &compiled, &groups, maximize, &mut path)
}

fn induct<P: Probability>(
    game: &GameStructure<P>,
    psi: &CompiledHistory,
    groups: &[Vec<(JointId, P)>],
    maximize: bool,
    path: &mut Vec<StateId>,
) -> Result<P> {
    if path.len() > psi.horizon() {
        return Ok(if psi.eval_with(|i| path[i]) { P::one() } else { P::zero() });
    }
    let current = *path.last().unwrap();
    let mut best: Option<P> = None;
    for group in groups {
        let mut value = P::zero();
        for (joint, weight) in group {
            if !weight.is_positive() {
                continue;
            }
            for (target, p) in game.successors(current, *joint)? {
                path.push(*target);
                let v = induct(game, psi, groups, maximize, path)?;
                path.pop();
                value = value + weight.clone() * p.clone() * v;
            }
        }
        best = Some(match best {
            None => value,
            Some(b) if (maximize && value > b) || (!maximize && value < b) => value,
            Some(b) => b,
        });
    }
    Ok(best.unwrap_or_else(P::zero))
}

/// `s ⊨ P⋈p ⟨A⟩[ψ]`.
pub fn check_prob_bound<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    coalition: AgentSet,
    psi: &HistoryFormula,
    comparison: Comparison,
    bound: &Rational,
) -> Result<bool> {
    let value = optimal_probability(game, s, coalition, psi, comparison.is_lower_bound())?;
    Ok(comparison.holds(&value, &P::from_rational(bound)))
}

/// All `n`-step histories from `s` satisfying ψ.
pub fn satisfying_language<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    psi: &HistoryFormula,
    n: usize,
) -> Result<MeasuredLanguage<P>> {
    game.check_state(s)?;
    let compiled = CompiledHistory::compile(game, psi)?;
    if n < compiled.horizon() {
        return Err(Error::HistoryTooShort {
            length: n,
            horizon: compiled.horizon(),
        });
    }
    let mut words = Vec::new();
    let mut probability = P::zero();
    let class = PlanClass::everything(game, n);
    let _ = walk_histories(game, s, class.allowed(), &mut |h: &History, p: &P| {
        if compiled.eval_with(|i| h.state(i)) {
            words.push(h.clone());
            probability = probability.clone() + p.clone();
        }
        ControlFlow::Continue(())
    })?;
    Ok(MeasuredLanguage::from_parts(words, n, probability))
}
