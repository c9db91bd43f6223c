//! Multi-agent stochastic transition systems.
//!
//! A [`GameStructure`] holds agents sharing one action alphabet, a finite
//! state space, a probabilistic transition function over joint actions, a
//! state labeling, and a stationary per-agent action profile used by the
//! probabilistic measures.

mod history;
mod plan;
pub mod text;

use std::fmt;

use crate::error::{Error, Result};
use crate::num::Probability;

pub use history::{
    enumerate_histories, history_probability, trace_of, walk_histories, walk_trace, History, HistoryVisitor, Step,
    Trace,
};
pub use plan::{compatible, plan_class, PlanClass, PlanPattern, PlanStep};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            pub fn index(self) -> usize {
                self.0
            }
        }
    };
}

id_type!(AgentId);
id_type!(ActionId);
id_type!(StateId);
id_type!(PropId);
id_type!(
    /// Index of a joint action in the lexicographic (agent-ordered) enumeration.
    JointId
);

/// Maximum number of agents; coalitions are bitmasks.
pub const MAX_AGENTS: usize = 32;

/// A set of agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AgentSet(u64);

impl AgentSet {
    pub const fn empty() -> Self {
        AgentSet(0)
    }

    pub fn all(agent_count: usize) -> Self {
        AgentSet((1u64 << agent_count) - 1)
    }

    pub fn singleton(agent: AgentId) -> Self {
        AgentSet(1 << agent.0)
    }

    pub fn from_agents(agents: impl IntoIterator<Item = AgentId>) -> Self {
        agents.into_iter().fold(Self::empty(), |s, a| s.with(a))
    }

    pub fn contains(self, agent: AgentId) -> bool {
        self.0 & (1 << agent.0) != 0
    }

    pub fn with(self, agent: AgentId) -> Self {
        AgentSet(self.0 | (1 << agent.0))
    }

    pub fn without(self, agent: AgentId) -> Self {
        AgentSet(self.0 & !(1 << agent.0))
    }

    pub fn union(self, other: AgentSet) -> Self {
        AgentSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: AgentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = AgentId> {
        (0..64).filter(move |i| self.0 & (1 << i) != 0).map(AgentId)
    }

    /// All subsets of `{0..agent_count}` containing `agent`, ordered by size
    /// and then lexicographically by sorted member ids.
    pub fn supersets_of(agent: AgentId, agent_count: usize) -> Vec<AgentSet> {
        let mut out = Vec::new();
        for size in 1..=agent_count {
            combinations(agent_count, size, &mut |members| {
                let set = AgentSet::from_agents(members.iter().map(|&i| AgentId(i)));
                if set.contains(agent) {
                    out.push(set);
                }
            });
        }
        out
    }
}

fn combinations(n: usize, k: usize, emit: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, acc: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
        if acc.len() == k {
            emit(acc);
            return;
        }
        for i in start..n {
            acc.push(i);
            go(i + 1, n, k, acc, emit);
            acc.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), emit);
}

/// Total assignment of one action per agent, in agent declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointAction(pub Vec<ActionId>);

impl JointAction {
    pub fn action_of(&self, agent: AgentId) -> ActionId {
        self.0[agent.0]
    }
}

/// Successor distribution of one `(state, joint action)` pair, sorted by state.
pub type Distribution<P> = Vec<(StateId, P)>;

#[derive(Debug, Clone)]
pub struct GameStructure<P> {
    agents: Vec<String>,
    actions: Vec<String>,
    states: Vec<String>,
    propositions: Vec<String>,
    labels: Vec<Vec<bool>>,
    joint_actions: Vec<JointAction>,
    transitions: Vec<Option<Distribution<P>>>,
    profile: Vec<Vec<P>>,
    joint_weights: Vec<P>,
}

impl<P: Probability> GameStructure<P> {
    pub fn builder(agents: &[&str], actions: &[&str]) -> GameBuilder<P> {
        GameBuilder::new(
            agents.iter().map(|s| s.to_string()).collect(),
            actions.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn propositions(&self) -> &[String] {
        &self.propositions
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn all_agents(&self) -> AgentSet {
        AgentSet::all(self.agents.len())
    }

    pub fn agent_id(&self, name: &str) -> Option<AgentId> {
        self.agents.iter().position(|a| a == name).map(AgentId)
    }

    pub fn action_id(&self, name: &str) -> Option<ActionId> {
        self.actions.iter().position(|a| a == name).map(ActionId)
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|a| a == name).map(StateId)
    }

    pub fn prop_id(&self, name: &str) -> Option<PropId> {
        self.propositions.iter().position(|a| a == name).map(PropId)
    }

    pub fn agent(&self, name: &str) -> Result<AgentId> {
        self.agent_id(name).ok_or_else(|| Error::unknown("agent", name))
    }

    pub fn state(&self, name: &str) -> Result<StateId> {
        self.state_id(name).ok_or_else(|| Error::unknown("state", name))
    }

    pub fn agent_name(&self, agent: AgentId) -> &str {
        &self.agents[agent.0]
    }

    pub fn action_name(&self, action: ActionId) -> &str {
        &self.actions[action.0]
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.states[state.0]
    }

    pub fn prop_name(&self, prop: PropId) -> &str {
        &self.propositions[prop.0]
    }

    pub fn check_state(&self, state: StateId) -> Result<()> {
        if state.0 < self.states.len() {
            Ok(())
        } else {
            Err(Error::unknown("state", format!("#{}", state.0)))
        }
    }

    pub fn check_agent(&self, agent: AgentId) -> Result<()> {
        if agent.0 < self.agents.len() {
            Ok(())
        } else {
            Err(Error::unknown("agent", format!("#{}", agent.0)))
        }
    }

    pub fn holds(&self, state: StateId, prop: PropId) -> bool {
        self.labels[state.0][prop.0]
    }

    pub fn label(&self, state: StateId) -> impl Iterator<Item = PropId> + '_ {
        self.labels[state.0]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| PropId(i))
    }

    /// Number of joint actions, `|Act|^|Ag|`.
    pub fn joint_count(&self) -> usize {
        self.joint_actions.len()
    }

    pub fn joint_ids(&self) -> impl Iterator<Item = JointId> {
        (0..self.joint_actions.len()).map(JointId)
    }

    pub fn joint_action(&self, id: JointId) -> &JointAction {
        &self.joint_actions[id.0]
    }

    pub fn joint_id(&self, actions: &[ActionId]) -> JointId {
        let base = self.actions.len();
        JointId(actions.iter().fold(0, |acc, a| acc * base + a.0))
    }

    /// Writes a joint action as a parenthesized tuple, e.g. `(c,d)`.
    pub fn joint_label(&self, id: JointId) -> String {
        let names: Vec<&str> = self.joint_actions[id.0]
            .0
            .iter()
            .map(|a| self.action_name(*a))
            .collect();
        format!("({})", names.join(","))
    }

    /// Transition distribution `δ(state, joint)`.
    pub fn successors(&self, state: StateId, joint: JointId) -> Result<&[(StateId, P)]> {
        self.transitions[state.0 * self.joint_actions.len() + joint.0]
            .as_deref()
            .ok_or_else(|| Error::MissingTransition {
                state: self.state_name(state).to_string(),
                action: self.joint_label(joint),
            })
    }

    pub fn transition_probability(&self, state: StateId, joint: JointId, target: StateId) -> Result<P> {
        Ok(self
            .successors(state, joint)?
            .iter()
            .find(|(s, _)| *s == target)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(P::zero))
    }

    pub fn has_transition(&self, state: StateId, joint: JointId) -> bool {
        self.transitions[state.0 * self.joint_actions.len() + joint.0].is_some()
    }

    pub fn action_probability(&self, agent: AgentId, action: ActionId) -> &P {
        &self.profile[agent.0][action.0]
    }

    /// Profile probability of a joint action: product of per-agent probabilities.
    pub fn joint_weight(&self, joint: JointId) -> &P {
        &self.joint_weights[joint.0]
    }

    /// Joint actions grouped by the components chosen by `coalition`; groups
    /// and their members are in lexicographic order.
    pub fn joint_groups(&self, coalition: AgentSet) -> Vec<Vec<JointId>> {
        let mut groups: std::collections::BTreeMap<Vec<ActionId>, Vec<JointId>> = Default::default();
        for j in self.joint_ids() {
            let key = coalition.iter().map(|a| self.joint_actions[j.0].0[a.0]).collect();
            groups.entry(key).or_default().push(j);
        }
        groups.into_values().collect()
    }

    /// Profile probability of the components of `joint` outside `coalition`.
    pub fn opponent_weight(&self, joint: JointId, coalition: AgentSet) -> P {
        self.joint_actions[joint.0]
            .0
            .iter()
            .enumerate()
            .filter(|(agent, _)| !coalition.contains(AgentId(*agent)))
            .fold(P::one(), |acc, (agent, a)| acc * self.profile[agent][a.0].clone())
    }

    pub fn profile(&self) -> &[Vec<P>] {
        &self.profile
    }

    /// Replaces the behavioral profile, validating that each row sums to one.
    pub fn with_profile(&self, profile: Vec<Vec<P>>) -> Result<Self> {
        validate_profile(&self.agents, &self.actions, &profile)?;
        let mut game = self.clone();
        game.joint_weights = joint_weights(&game.joint_actions, &profile);
        game.profile = profile;
        Ok(game)
    }

    pub fn uniform_profile(&self) -> Vec<Vec<P>> {
        let share = P::one() / (0..self.actions.len()).fold(P::zero(), |acc, _| acc + P::one());
        vec![vec![share; self.actions.len()]; self.agents.len()]
    }

    /// Converts all probabilities, e.g. from exact rationals to `f64`.
    pub fn map_probabilities<Q: Probability>(&self, f: impl Fn(&P) -> Q) -> GameStructure<Q> {
        let transitions = self
            .transitions
            .iter()
            .map(|d| d.as_ref().map(|d| d.iter().map(|(s, p)| (*s, f(p))).collect()))
            .collect();
        let profile: Vec<Vec<Q>> = self.profile.iter().map(|row| row.iter().map(&f).collect()).collect();
        GameStructure {
            agents: self.agents.clone(),
            actions: self.actions.clone(),
            states: self.states.clone(),
            propositions: self.propositions.clone(),
            labels: self.labels.clone(),
            joint_weights: joint_weights(&self.joint_actions, &profile),
            joint_actions: self.joint_actions.clone(),
            transitions,
            profile,
        }
    }

    /// `true` when every present transition has a single successor.
    pub fn is_deterministic(&self) -> bool {
        self.transitions.iter().flatten().all(|d| d.len() == 1)
    }
}

fn joint_weights<P: Probability>(joints: &[JointAction], profile: &[Vec<P>]) -> Vec<P> {
    joints
        .iter()
        .map(|ja| {
            ja.0.iter()
                .enumerate()
                .fold(P::one(), |acc, (agent, a)| acc * profile[agent][a.0].clone())
        })
        .collect()
}

fn validate_profile<P: Probability>(agents: &[String], actions: &[String], profile: &[Vec<P>]) -> Result<()> {
    if profile.len() != agents.len() {
        return Err(Error::InvalidModel(format!(
            "profile has {} rows for {} agents",
            profile.len(),
            agents.len()
        )));
    }
    for (agent, row) in agents.iter().zip(profile) {
        if row.len() != actions.len() {
            return Err(Error::InvalidModel(format!("profile of {agent} has wrong arity")));
        }
        if row.iter().any(|p| *p < P::zero()) {
            return Err(Error::InvalidModel(format!("profile of {agent} has a negative entry")));
        }
        let total = row.iter().cloned().fold(P::zero(), |a, b| a + b);
        if !total.is_unit() {
            return Err(Error::InvalidModel(format!(
                "profile of {agent} sums to {total:?}, not 1"
            )));
        }
    }
    Ok(())
}

impl<P> fmt::Display for GameStructure<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} agents, {} actions, {} states, {} propositions",
            self.agents.len(),
            self.actions.len(),
            self.states.len(),
            self.propositions.len()
        )
    }
}

/// Incremental constructor for [`GameStructure`] using names.
#[derive(Debug, Clone)]
pub struct GameBuilder<P> {
    agents: Vec<String>,
    actions: Vec<String>,
    states: Vec<String>,
    propositions: Vec<String>,
    labels: Vec<Vec<String>>,
    transitions: Vec<(String, Vec<String>, Vec<(String, P)>)>,
    profile: Vec<(String, Vec<(String, P)>)>,
}

impl<P: Probability> GameBuilder<P> {
    pub fn new(agents: Vec<String>, actions: Vec<String>) -> Self {
        GameBuilder {
            agents,
            actions,
            states: Vec::new(),
            propositions: Vec::new(),
            labels: Vec::new(),
            transitions: Vec::new(),
            profile: Vec::new(),
        }
    }

    pub fn proposition(mut self, name: &str) -> Self {
        self.propositions.push(name.to_string());
        self
    }

    pub fn propositions(mut self, names: &[&str]) -> Self {
        self.propositions.extend(names.iter().map(|s| s.to_string()));
        self
    }

    pub fn state(mut self, name: &str, label: &[&str]) -> Self {
        self.states.push(name.to_string());
        self.labels.push(label.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn transition(mut self, from: &str, joint: &[&str], targets: Vec<(&str, P)>) -> Self {
        self.transitions.push((
            from.to_string(),
            joint.iter().map(|s| s.to_string()).collect(),
            targets.into_iter().map(|(s, p)| (s.to_string(), p)).collect(),
        ));
        self
    }

    /// Sets the action distribution of one agent. Agents without an explicit
    /// profile act uniformly.
    pub fn profile(mut self, agent: &str, dist: Vec<(&str, P)>) -> Self {
        self.profile.push((
            agent.to_string(),
            dist.into_iter().map(|(a, p)| (a.to_string(), p)).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<GameStructure<P>> {
        if self.agents.is_empty() {
            return Err(Error::InvalidModel("no agents declared".into()));
        }
        if self.agents.len() > MAX_AGENTS {
            return Err(Error::InvalidModel(format!("more than {MAX_AGENTS} agents")));
        }
        if self.actions.is_empty() {
            return Err(Error::InvalidModel("no actions declared".into()));
        }
        if self.states.is_empty() {
            return Err(Error::InvalidModel("no states declared".into()));
        }
        check_unique("agent", &self.agents)?;
        check_unique("action", &self.actions)?;
        check_unique("state", &self.states)?;
        check_unique("proposition", &self.propositions)?;
        let joint_count = self
            .actions
            .len()
            .checked_pow(self.agents.len() as u32)
            .filter(|&n| n <= 1 << 20)
            .ok_or_else(|| Error::InvalidModel("too many joint actions".into()))?;

        let find = |names: &[String], kind: &'static str, name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::unknown(kind, name))
        };

        let mut labels = Vec::with_capacity(self.states.len());
        for label in &self.labels {
            let mut row = vec![false; self.propositions.len()];
            for p in label {
                row[find(&self.propositions, "proposition", p)?] = true;
            }
            labels.push(row);
        }

        let base = self.actions.len();
        let joint_actions: Vec<JointAction> = (0..joint_count)
            .map(|mut idx| {
                let mut acts = vec![ActionId(0); self.agents.len()];
                for slot in acts.iter_mut().rev() {
                    *slot = ActionId(idx % base);
                    idx /= base;
                }
                JointAction(acts)
            })
            .collect();

        let mut transitions: Vec<Option<Distribution<P>>> = vec![None; self.states.len() * joint_count];
        for (from, joint, targets) in self.transitions {
            let s = find(&self.states, "state", &from)?;
            if joint.len() != self.agents.len() {
                return Err(Error::InvalidModel(format!(
                    "joint action ({}) has {} components for {} agents",
                    joint.join(","),
                    joint.len(),
                    self.agents.len()
                )));
            }
            let mut j = 0;
            for a in &joint {
                j = j * base + find(&self.actions, "action", a)?;
            }
            let slot = &mut transitions[s * joint_count + j];
            let dist = slot.get_or_insert_with(Vec::new);
            for (target, p) in targets {
                if p < P::zero() {
                    return Err(Error::InvalidModel(format!("negative probability from {from}")));
                }
                if !p.is_positive() {
                    continue;
                }
                let t = StateId(find(&self.states, "state", &target)?);
                match dist.iter_mut().find(|(s, _)| *s == t) {
                    Some((_, q)) => *q = q.clone() + p,
                    None => dist.push((t, p)),
                }
            }
            dist.sort_by_key(|(s, _)| *s);
        }
        for (idx, dist) in transitions.iter().enumerate() {
            if let Some(dist) = dist {
                let total = dist.iter().map(|(_, p)| p.clone()).fold(P::zero(), |a, b| a + b);
                if !total.is_unit() {
                    let (s, j) = (idx / joint_count, idx % joint_count);
                    return Err(Error::InvalidModel(format!(
                        "distribution of ({}, joint #{}) sums to {:?}, not 1",
                        self.states[s], j, total
                    )));
                }
            }
        }

        let uniform = P::one() / (0..base).fold(P::zero(), |acc, _| acc + P::one());
        let mut profile = vec![vec![uniform; base]; self.agents.len()];
        for (agent, dist) in &self.profile {
            let row = &mut profile[find(&self.agents, "agent", agent)?];
            row.iter_mut().for_each(|p| *p = P::zero());
            for (a, p) in dist {
                row[find(&self.actions, "action", a)?] = p.clone();
            }
        }
        validate_profile(&self.agents, &self.actions, &profile)?;

        Ok(GameStructure {
            joint_weights: joint_weights(&joint_actions, &profile),
            agents: self.agents,
            actions: self.actions,
            states: self.states,
            propositions: self.propositions,
            labels,
            joint_actions,
            transitions,
            profile,
        })
    }
}

fn check_unique(kind: &str, names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(Error::InvalidModel(format!("duplicate {kind} `{n}`")));
        }
    }
    Ok(())
}
