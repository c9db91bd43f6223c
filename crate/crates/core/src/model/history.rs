use std::ops::ControlFlow;

use super::{GameStructure, JointId, StateId};
use crate::error::Result;
use crate::num::Probability;

/// One transition of a history: the joint action taken and the state reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub action: JointId,
    pub target: StateId,
}

/// Finite alternating sequence `s0 α0 s1 α1 … sk` of positive-probability moves.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct History {
    start: StateId,
    steps: Vec<Step>,
}

impl History {
    pub fn new(start: StateId) -> Self {
        History {
            start,
            steps: Vec::new(),
        }
    }

    /// Builds a history, checking that every move has positive probability.
    pub fn from_steps<P: Probability>(game: &GameStructure<P>, start: StateId, steps: Vec<Step>) -> Result<Self> {
        game.check_state(start)?;
        let mut current = start;
        for step in &steps {
            if !game.transition_probability(current, step.action, step.target)?.is_positive() {
                return Err(crate::Error::Argument(format!(
                    "{} -{}-> {} has probability zero",
                    game.state_name(current),
                    game.joint_label(step.action),
                    game.state_name(step.target)
                )));
            }
            current = step.target;
        }
        Ok(History { start, steps })
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Number of transitions.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `ρ_s(i)`; position 0 is the start state.
    pub fn state(&self, i: usize) -> StateId {
        if i == 0 {
            self.start
        } else {
            self.steps[i - 1].target
        }
    }

    pub fn last(&self) -> StateId {
        self.steps.last().map_or(self.start, |s| s.target)
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + '_ {
        std::iter::once(self.start).chain(self.steps.iter().map(|s| s.target))
    }

    /// `ρ_α(i)`.
    pub fn action(&self, i: usize) -> JointId {
        self.steps[i].action
    }

    pub(crate) fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub(crate) fn pop(&mut self) {
        self.steps.pop();
    }

    pub fn display<P: Probability>(&self, game: &GameStructure<P>) -> String {
        let mut out = game.state_name(self.start).to_string();
        for step in &self.steps {
            out.push_str(&format!(" -{}-> {}", game.joint_label(step.action), game.state_name(step.target)));
        }
        out
    }
}

/// State-erased action sequence of a history; also the representation of a
/// fully specified joint plan.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Trace(pub Vec<JointId>);

impl Trace {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn trace_of(history: &History) -> Trace {
    Trace(history.steps.iter().map(|s| s.action).collect())
}

/// Profile-weighted probability `ℙ_s(ρ)`: product over steps of the joint
/// action's profile probability and the transition probability.
pub fn history_probability<P: Probability>(game: &GameStructure<P>, history: &History) -> Result<P> {
    let mut p = P::one();
    let mut current = history.start;
    for step in &history.steps {
        p = p * game.joint_weight(step.action).clone()
            * game.transition_probability(current, step.action, step.target)?;
        current = step.target;
    }
    Ok(p)
}

/// All `n`-step histories from `start`, in lexicographic order of joint
/// action then successor.
pub fn enumerate_histories<P: Probability>(game: &GameStructure<P>, start: StateId, n: usize) -> Result<Vec<History>> {
    game.check_state(start)?;
    let all: Vec<JointId> = game.joint_ids().collect();
    let sets = vec![all; n];
    let mut out = Vec::new();
    let _ = walk_histories(game, start, &sets, &mut |h: &History, _: &P| {
        out.push(h.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Receives complete histories together with their probability.
pub trait HistoryVisitor<P> {
    fn visit(&mut self, history: &History, probability: &P) -> ControlFlow<()>;
}

impl<P, F: FnMut(&History, &P) -> ControlFlow<()>> HistoryVisitor<P> for F {
    fn visit(&mut self, history: &History, probability: &P) -> ControlFlow<()> {
        self(history, probability)
    }
}

/// Depth-first walk over every history whose `k`-th action lies in
/// `allowed[k]`. Stops early when the visitor breaks.
pub fn walk_histories<P: Probability, V: HistoryVisitor<P> + ?Sized>(
    game: &GameStructure<P>,
    start: StateId,
    allowed: &[Vec<JointId>],
    visitor: &mut V,
) -> Result<ControlFlow<()>> {
    let mut history = History::new(start);
    walk_from(game, &mut history, P::one(), allowed, visitor)
}

fn walk_from<P: Probability, V: HistoryVisitor<P> + ?Sized>(
    game: &GameStructure<P>,
    history: &mut History,
    probability: P,
    allowed: &[Vec<JointId>],
    visitor: &mut V,
) -> Result<ControlFlow<()>> {
    let depth = history.len();
    if depth == allowed.len() {
        return Ok(visitor.visit(history, &probability));
    }
    let current = history.last();
    for &action in &allowed[depth] {
        let weighted = probability.clone() * game.joint_weight(action).clone();
        for (target, p) in game.successors(current, action)? {
            history.push(Step {
                action,
                target: *target,
            });
            let flow = walk_from(game, history, weighted.clone() * p.clone(), allowed, visitor)?;
            history.pop();
            if flow.is_break() {
                return Ok(flow);
            }
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// Walks the histories whose trace is exactly `trace`.
pub fn walk_trace<P: Probability, V: HistoryVisitor<P> + ?Sized>(
    game: &GameStructure<P>,
    start: StateId,
    trace: &[JointId],
    visitor: &mut V,
) -> Result<ControlFlow<()>> {
    let mut history = History::new(start);
    walk_trace_from(game, &mut history, P::one(), trace, visitor)
}

fn walk_trace_from<P: Probability, V: HistoryVisitor<P> + ?Sized>(
    game: &GameStructure<P>,
    history: &mut History,
    probability: P,
    trace: &[JointId],
    visitor: &mut V,
) -> Result<ControlFlow<()>> {
    let depth = history.len();
    if depth == trace.len() {
        return Ok(visitor.visit(history, &probability));
    }
    let action = trace[depth];
    let weighted = probability * game.joint_weight(action).clone();
    for (target, p) in game.successors(history.last(), action)? {
        history.push(Step {
            action,
            target: *target,
        });
        let flow = walk_trace_from(game, history, weighted.clone() * p.clone(), trace, visitor)?;
        history.pop();
        if flow.is_break() {
            return Ok(flow);
        }
    }
    Ok(ControlFlow::Continue(()))
}
