//! A deliberately naive reference implementation: it enumerates every joint
//! action sequence, expands state paths recursively and evaluates formulae
//! directly on state vectors. It shares no code paths with the library's
//! walkers, compiled formulae or plan classes.

#![allow(dead_code)]

pub mod spectral;

use num_traits::{One, Zero};
use respcheck_core::logic::{HistoryFormula, ResponsibilityKind, StateFormula};
use respcheck_core::model::{AgentId, GameStructure, JointId, PlanPattern, StateId};
use respcheck_core::Rational;

pub struct Run {
    pub joints: Vec<usize>,
    pub states: Vec<usize>,
    pub probability: Rational,
}

pub fn holds(game: &GameStructure<Rational>, s: usize, phi: &StateFormula) -> bool {
    match phi {
        StateFormula::True => true,
        StateFormula::Atom(p) => game.label(StateId(s)).any(|q| q == *p),
        StateFormula::Not(inner) => !holds(game, s, inner),
        StateFormula::And(l, r) => holds(game, s, l) && holds(game, s, r),
        other => panic!("oracle only handles propositional formulae, got {other:?}"),
    }
}

pub fn satisfies(game: &GameStructure<Rational>, states: &[usize], psi: &HistoryFormula) -> bool {
    match psi {
        HistoryFormula::Next(phi) => holds(game, states[1], phi),
        HistoryFormula::Until(a, k, b) => {
            (1..=*k).any(|i| holds(game, states[i], b) && (0..i).all(|j| holds(game, states[j], a)))
        }
        HistoryFormula::Not(inner) => !satisfies(game, states, inner),
        HistoryFormula::And(l, r) => satisfies(game, states, l) && satisfies(game, states, r),
    }
}

/// Every history of length `n` from `start`, by depth-first expansion of
/// joint actions and then successors.
pub fn runs(game: &GameStructure<Rational>, start: usize, n: usize) -> Vec<Run> {
    let mut out = Vec::new();
    let mut joints = Vec::with_capacity(n);
    let mut states = vec![start];
    expand(game, n, &mut joints, &mut states, Rational::one(), &mut out);
    out
}

fn expand(
    game: &GameStructure<Rational>,
    n: usize,
    joints: &mut Vec<usize>,
    states: &mut Vec<usize>,
    p: Rational,
    out: &mut Vec<Run>,
) {
    if joints.len() == n {
        out.push(Run {
            joints: joints.clone(),
            states: states.clone(),
            probability: p,
        });
        return;
    }
    let s = *states.last().unwrap();
    for j in 0..game.joint_count() {
        let mut weight = Rational::one();
        for (agent, action) in game.joint_action(JointId(j)).0.iter().enumerate() {
            weight *= &game.profile()[agent][action.0];
        }
        if weight.is_zero() {
            continue;
        }
        for (t, q) in game.successors(StateId(s), JointId(j)).unwrap() {
            if q.is_zero() {
                continue;
            }
            joints.push(j);
            states.push(t.0);
            expand(game, n, joints, states, &p * &weight * q, out);
            joints.pop();
            states.pop();
        }
    }
}

/// Whether the joint sequence agrees with the plan on the agents of `coalition`.
pub fn follows(game: &GameStructure<Rational>, joints: &[usize], plan: &PlanPattern, coalition: &[usize]) -> bool {
    let n = joints.len();
    let steps = plan.steps();
    let offset = if plan.wildcard_prefix() { n - steps.len() } else { 0 };
    steps.iter().enumerate().all(|(k, step)| {
        let actions = &game.joint_action(JointId(joints[offset + k])).0;
        coalition.iter().all(|&a| step[a].map_or(true, |want| actions[a] == want))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Degrees {
        count: Rational,
        prob: Rational,
        entropy: f64,
    },
    Unsatisfiable,
    Unavoidable,
}

pub fn zero() -> Outcome {
    Outcome::Degrees {
        count: Rational::zero(),
        prob: Rational::zero(),
        entropy: 0.0,
    }
}

#[derive(Default, Clone)]
struct Lang {
    count: u64,
    prob: Rational,
}

impl Lang {
    fn empty() -> Self {
        Lang {
            count: 0,
            prob: Rational::zero(),
        }
    }
}

fn h(count: u64) -> f64 {
    (1.0 + count as f64).log2()
}

pub struct Query<'a> {
    pub game: &'a GameStructure<Rational>,
    pub start: usize,
    pub agent: usize,
    pub plan: &'a PlanPattern,
    pub outcome: &'a HistoryFormula,
}

impl Query<'_> {
    pub fn length(&self) -> usize {
        self.outcome.horizon().max(self.plan.len())
    }

    fn agents_except(&self, coalition: &[usize]) -> Vec<usize> {
        coalition.iter().copied().filter(|&a| a != self.agent).collect()
    }

    fn coalitions(&self) -> Vec<Vec<usize>> {
        let others: Vec<usize> = (0..self.game.agent_count()).filter(|&a| a != self.agent).collect();
        (0..1u32 << others.len())
            .map(|mask| {
                let mut c: Vec<usize> = others
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, a)| *a)
                    .collect();
                c.push(self.agent);
                c.sort_unstable();
                c
            })
            .collect()
    }

    pub fn degree(&self, kind: ResponsibilityKind) -> Outcome {
        self.degree_in(&runs(self.game, self.start, self.length()), kind)
    }

    /// As `degree`, over runs enumerated beforehand for the query length.
    pub fn degree_in(&self, all_runs: &[Run], kind: ResponsibilityKind) -> Outcome {
        let sat: Vec<bool> = all_runs.iter().map(|r| satisfies(self.game, &r.states, self.outcome)).collect();
        // The language of runs in the class of `coalition` whose outcome is `want`.
        let select = |coalition: &[usize], want: bool| {
            let mut l = Lang::empty();
            for (r, &s) in all_runs.iter().zip(&sat) {
                if s == want && follows(self.game, &r.joints, self.plan, coalition) {
                    l.count += 1;
                    l.prob += &r.probability;
                }
            }
            l
        };
        let everyone: Vec<usize> = (0..self.game.agent_count()).collect();
        let l_phi = select(&[], true);
        let l_not = select(&[], false);
        match kind {
            ResponsibilityKind::Car => {
                if l_not.count == 0 {
                    return zero();
                }
                if l_phi.count == 0 {
                    return Outcome::Unsatisfiable;
                }
                let pos = select(&[self.agent], true);
                Outcome::Degrees {
                    count: Rational::new(pos.count.into(), l_phi.count.into()),
                    prob: pos.prob / l_phi.prob,
                    entropy: h(pos.count) / h(l_phi.count),
                }
            }
            ResponsibilityKind::Cpr => {
                let pos = select(&everyone, true);
                if pos.count == 0 {
                    return zero();
                }
                if l_not.count == 0 {
                    return Outcome::Unavoidable;
                }
                let neg = select(&self.agents_except(&everyone), false);
                Outcome::Degrees {
                    count: Rational::new(neg.count.into(), l_not.count.into()),
                    prob: neg.prob / l_not.prob,
                    entropy: h(neg.count) / h(l_not.count),
                }
            }
            ResponsibilityKind::Ccr => {
                let mut terms = Vec::new();
                for j in self.coalitions() {
                    let pos = select(&j, true);
                    let neg = select(&self.agents_except(&j), false);
                    if pos.count > 0 && neg.count > 0 {
                        terms.push(pos);
                    }
                }
                if terms.is_empty() {
                    return zero();
                }
                if l_phi.count == 0 {
                    return Outcome::Unsatisfiable;
                }
                let m = terms.len() as u64;
                let count_sum: u64 = terms.iter().map(|t| t.count).sum();
                let prob_sum = terms.iter().fold(Rational::zero(), |acc, t| acc + t.prob.clone());
                let entropy_sum: f64 = terms.iter().map(|t| h(t.count) / h(l_phi.count)).sum();
                Outcome::Degrees {
                    count: Rational::new(count_sum.into(), (l_phi.count * m).into()),
                    prob: prob_sum / l_phi.prob / Rational::from_integer(m.into()),
                    entropy: entropy_sum / m as f64,
                }
            }
        }
    }

    /// Qualitative verdict from the definitions: guarantee by the class of
    /// plans compatible on the coalition, plus an all-violating plan among
    /// those compatible on the counterfactual coalition.
    pub fn verdict(&self, kind: ResponsibilityKind) -> bool {
        self.verdict_in(&runs(self.game, self.start, self.length()), kind)
    }

    pub fn verdict_in(&self, all_runs: &[Run], kind: ResponsibilityKind) -> bool {
        let sat = |r: &Run| satisfies(self.game, &r.states, self.outcome);
        let guarantees = |c: &[usize]| {
            all_runs
                .iter()
                .filter(|r| follows(self.game, &r.joints, self.plan, c))
                .all(sat)
        };
        let avoidable = |c: &[usize]| {
            let mut by_plan: std::collections::BTreeMap<&[usize], bool> = Default::default();
            for r in all_runs.iter().filter(|r| follows(self.game, &r.joints, self.plan, c)) {
                *by_plan.entry(&r.joints[..]).or_insert(true) &= !sat(r);
            }
            by_plan.values().any(|v| *v)
        };
        let everyone: Vec<usize> = (0..self.game.agent_count()).collect();
        match kind {
            ResponsibilityKind::Car => guarantees(&[self.agent]) && avoidable(&[]),
            ResponsibilityKind::Cpr => guarantees(&everyone) && avoidable(&self.agents_except(&everyone)),
            ResponsibilityKind::Ccr => {
                guarantees(&everyone)
                    && self
                        .coalitions()
                        .iter()
                        .any(|j| guarantees(j) && avoidable(&self.agents_except(j)))
            }
        }
    }
}

pub fn agent(i: usize) -> AgentId {
    AgentId(i)
}
