//! Fixtures and random generators for tests.
//!
//! The continuous prisoners' dilemma is the running example: two agents
//! repeatedly cooperate (`c`) or defect (`d`), and the joint action alone
//! decides the next state.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::{HistoryFormula, StateFormula};
use crate::model::text::ModelFile;
use crate::model::{AgentId, GameStructure, PlanPattern, PropId};
use crate::num::Rational;

pub const CPD_MODEL: &str = "\
# Continuous prisoners' dilemma.
agents A1 A2
actions c d
props cooperative1 cooperative2

define fine = !cooperative1 & !cooperative2
define reward = cooperative1 & cooperative2
define payoff1 = cooperative1 & !cooperative2
define payoff2 = !cooperative1 & cooperative2

state s0 {}
state s1 {cooperative1 cooperative2}
state s2 {cooperative1}
state s3 {cooperative2}

# The successor only depends on the joint action.
trans * (d,d) -> s0 : 1
trans * (c,c) -> s1 : 1
trans * (c,d) -> s2 : 1
trans * (d,c) -> s3 : 1

# Agents act uniformly unless the `biased` profile is selected.
profile biased A1 {c: 3/4, d: 1/4}
profile biased A2 {c: 3/4, d: 1/4}
";

pub fn cpd_file() -> ModelFile {
    ModelFile::parse(CPD_MODEL).expect("bundled model parses")
}

/// The prisoners' dilemma under the uniform profile.
pub fn cpd() -> GameStructure<Rational> {
    cpd_file().game
}

/// The prisoners' dilemma with `c` played with probability 3/4.
pub fn cpd_biased() -> GameStructure<Rational> {
    cpd_file().game_with_profile(Some("biased")).expect("biased profile exists")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct RandomModelConfig {
    pub max_agents: usize,
    pub max_states: usize,
    pub max_actions: usize,
    pub propositions: usize,
    pub deterministic: bool,
    pub uniform_profile: bool,
}

impl Default for RandomModelConfig {
    fn default() -> Self {
        RandomModelConfig {
            max_agents: 3,
            max_states: 4,
            max_actions: 3,
            propositions: 2,
            deterministic: false,
            uniform_profile: false,
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// A complete random model: every (state, joint action) has a transition.
pub fn random_game(rng: &mut impl Rng, cfg: RandomModelConfig) -> GameStructure<Rational> {
    let agents: Vec<String> = (0..rng.gen_range(1..=cfg.max_agents)).map(|i| format!("A{}", i + 1)).collect();
    let actions: Vec<String> = (0..rng.gen_range(1..=cfg.max_actions)).map(|i| format!("a{i}")).collect();
    let states: Vec<String> = (0..rng.gen_range(1..=cfg.max_states)).map(|i| format!("s{i}")).collect();
    let props: Vec<String> = (0..cfg.propositions).map(|i| format!("p{i}")).collect();
    let agent_refs: Vec<&str> = agents.iter().map(String::as_str).collect();
    let action_refs: Vec<&str> = actions.iter().map(String::as_str).collect();
    let prop_refs: Vec<&str> = props.iter().map(String::as_str).collect();
    let mut b = GameStructure::<Rational>::builder(&agent_refs, &action_refs).propositions(&prop_refs);
    for s in &states {
        let label: Vec<&str> = prop_refs.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        b = b.state(s, &label);
    }
    let joint_count = actions.len().pow(agents.len() as u32);
    for s in &states {
        for mut j in 0..joint_count {
            let mut joint = vec![""; agents.len()];
            for slot in joint.iter_mut().rev() {
                *slot = &actions[j % actions.len()];
                j /= actions.len();
            }
            let first = states.choose(rng).unwrap();
            let targets = if cfg.deterministic || states.len() == 1 || rng.gen_bool(0.5) {
                vec![(first.as_str(), q(1, 1))]
            } else {
                let second = states.iter().find(|t| *t != first).unwrap();
                let den = rng.gen_range(2..=4);
                let num = rng.gen_range(1..den);
                vec![(first.as_str(), q(num, den)), (second.as_str(), q(den - num, den))]
            };
            b = b.transition(s, &joint, targets);
        }
    }
    if !cfg.uniform_profile {
        for agent in &agent_refs {
            let weights: Vec<i64> = actions.iter().map(|_| rng.gen_range(1..=3)).collect();
            let total: i64 = weights.iter().sum();
            b = b.profile(
                agent,
                action_refs.iter().zip(&weights).map(|(a, w)| (*a, q(*w, total))).collect(),
            );
        }
    }
    b.build().expect("random model is well formed")
}

/// A random propositional formula.
pub fn random_predicate(rng: &mut impl Rng, game: &GameStructure<Rational>, depth: usize) -> StateFormula {
    let leaf = depth == 0 || rng.gen_bool(0.4);
    if leaf {
        let props = game.propositions().len();
        return match rng.gen_range(0..=props) {
            0 if rng.gen_bool(0.3) => StateFormula::True,
            _ if props == 0 => StateFormula::True,
            i => StateFormula::Atom(PropId(i.saturating_sub(1).min(props - 1))),
        };
    }
    match rng.gen_range(0..3) {
        0 => random_predicate(rng, game, depth - 1).not(),
        1 => random_predicate(rng, game, depth - 1).and(random_predicate(rng, game, depth - 1)),
        _ => random_predicate(rng, game, depth - 1).or(random_predicate(rng, game, depth - 1)),
    }
}

/// A random history formula over propositional operands with horizon at most `max_horizon` (≥ 1).
pub fn random_history_formula(rng: &mut impl Rng, game: &GameStructure<Rational>, max_horizon: usize) -> HistoryFormula {
    random_history(rng, game, max_horizon.max(1), 2)
}

fn random_history(rng: &mut impl Rng, game: &GameStructure<Rational>, max_horizon: usize, depth: usize) -> HistoryFormula {
    let choice = if depth == 0 { rng.gen_range(0..4) } else { rng.gen_range(0..6) };
    let k = rng.gen_range(1..=max_horizon);
    match choice {
        0 => HistoryFormula::next(random_predicate(rng, game, 2)),
        1 => HistoryFormula::until(random_predicate(rng, game, 1), k, random_predicate(rng, game, 1)),
        2 => HistoryFormula::finally(k, random_predicate(rng, game, 2)),
        3 => HistoryFormula::globally(k, random_predicate(rng, game, 2)),
        4 => random_history(rng, game, max_horizon, depth - 1).not(),
        _ => random_history(rng, game, max_horizon, depth - 1).and(random_history(rng, game, max_horizon, depth - 1)),
    }
}

/// A random partial plan of at most `max_len` steps that constrains `agent`
/// at least once.
pub fn random_plan(rng: &mut impl Rng, game: &GameStructure<Rational>, agent: AgentId, max_len: usize) -> PlanPattern {
    let len = rng.gen_range(1..=max_len.max(1));
    let actions = game.actions().len();
    let mut steps: Vec<Vec<Option<crate::model::ActionId>>> = (0..len)
        .map(|_| {
            (0..game.agent_count())
                .map(|_| rng.gen_bool(0.6).then(|| crate::model::ActionId(rng.gen_range(0..actions))))
                .collect()
        })
        .collect();
    let at = rng.gen_range(0..len);
    if steps[at][agent.0].is_none() {
        steps[at][agent.0] = Some(crate::model::ActionId(rng.gen_range(0..actions)));
    }
    let wildcard = rng.gen_bool(0.25);
    PlanPattern::new(game.agent_count(), steps, wildcard).expect("plan matches the model")
}
