use super::{ActionId, AgentId, AgentSet, GameStructure, JointId, Trace};
use crate::error::{Error, Result};
use crate::num::Probability;

/// Per-agent constraint of one plan step; `None` leaves the agent free.
pub type PlanStep = Vec<Option<ActionId>>;

/// A possibly partial joint plan.
///
/// Without `wildcard_prefix` the steps constrain positions `0..steps.len()`;
/// with it they constrain the last `steps.len()` positions of whatever
/// horizon the plan is expanded to, and everything before is free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanPattern {
    coalition: AgentSet,
    steps: Vec<PlanStep>,
    wildcard_prefix: bool,
}

impl PlanPattern {
    pub fn new(agent_count: usize, steps: Vec<PlanStep>, wildcard_prefix: bool) -> Result<Self> {
        if steps.is_empty() {
            return Err(Error::Argument("a plan needs at least one step".into()));
        }
        if let Some(bad) = steps.iter().find(|s| s.len() != agent_count) {
            return Err(Error::Argument(format!(
                "plan step has {} entries for {agent_count} agents",
                bad.len()
            )));
        }
        let coalition = AgentSet::from_agents(
            steps
                .iter()
                .flat_map(|s| s.iter().enumerate().filter(|(_, a)| a.is_some()).map(|(i, _)| AgentId(i))),
        );
        Ok(PlanPattern {
            coalition,
            steps,
            wildcard_prefix,
        })
    }

    /// The pattern leaving every agent free at every step.
    pub fn universal(agent_count: usize) -> Self {
        PlanPattern {
            coalition: AgentSet::empty(),
            steps: vec![vec![None; agent_count]],
            wildcard_prefix: true,
        }
    }

    /// A fully specified plan following `trace` exactly.
    pub fn from_trace<P: Probability>(game: &GameStructure<P>, trace: &Trace) -> Result<Self> {
        let steps = trace
            .0
            .iter()
            .map(|j| game.joint_action(*j).0.iter().map(|a| Some(*a)).collect())
            .collect();
        PlanPattern::new(game.agent_count(), steps, false)
    }

    /// Agents constrained somewhere in the plan.
    pub fn coalition(&self) -> AgentSet {
        self.coalition
    }

    pub fn steps(&self) -> &[PlanStep] {
        &self.steps
    }

    pub fn wildcard_prefix(&self) -> bool {
        self.wildcard_prefix
    }

    /// Number of explicit steps.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The constraint active at `position` when expanded to `horizon` steps.
    pub fn constraint_at(&self, position: usize, horizon: usize) -> Option<&PlanStep> {
        let offset = if self.wildcard_prefix {
            horizon.checked_sub(self.steps.len())?
        } else {
            0
        };
        position.checked_sub(offset).and_then(|k| self.steps.get(k))
    }

    pub fn display<P: Probability>(&self, game: &GameStructure<P>) -> String {
        let mut parts = Vec::new();
        if self.wildcard_prefix {
            parts.push("...".to_string());
        }
        for step in &self.steps {
            let entries: Vec<&str> = step
                .iter()
                .map(|a| a.map_or("*", |a| game.action_name(a)))
                .collect();
            parts.push(format!("({})", entries.join(",")));
        }
        parts.join("; ")
    }
}

/// A set of fully specified plans of a common length, stored as the product
/// of the joint actions allowed at each position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanClass {
    allowed: Vec<Vec<JointId>>,
}

impl PlanClass {
    pub fn everything<P: Probability>(game: &GameStructure<P>, horizon: usize) -> Self {
        PlanClass {
            allowed: vec![game.joint_ids().collect(); horizon],
        }
    }

    pub fn horizon(&self) -> usize {
        self.allowed.len()
    }

    pub fn allowed(&self) -> &[Vec<JointId>] {
        &self.allowed
    }

    /// Number of plans, saturating at `u128::MAX`.
    pub fn len(&self) -> u128 {
        self.allowed
            .iter()
            .fold(1u128, |acc, s| acc.saturating_mul(s.len() as u128))
    }

    pub fn is_empty(&self) -> bool {
        self.allowed.iter().any(|s| s.is_empty())
    }

    pub fn contains(&self, trace: &Trace) -> bool {
        trace.len() == self.allowed.len() && trace.0.iter().zip(&self.allowed).all(|(j, s)| s.contains(j))
    }

    /// Plans in lexicographic order.
    pub fn iter(&self) -> PlanIter<'_> {
        PlanIter {
            class: self,
            cursor: if self.is_empty() {
                None
            } else {
                Some(vec![0; self.allowed.len()])
            },
        }
    }
}

pub struct PlanIter<'a> {
    class: &'a PlanClass,
    cursor: Option<Vec<usize>>,
}

impl Iterator for PlanIter<'_> {
    type Item = Trace;

    fn next(&mut self) -> Option<Trace> {
        let cursor = self.cursor.as_mut()?;
        let allowed = &self.class.allowed;
        let trace = Trace(cursor.iter().zip(allowed).map(|(&i, s)| s[i]).collect());
        let mut k = cursor.len();
        loop {
            if k == 0 {
                self.cursor = None;
                break;
            }
            k -= 1;
            cursor[k] += 1;
            if cursor[k] < allowed[k].len() {
                break;
            }
            cursor[k] = 0;
        }
        Some(trace)
    }
}

/// `Plan_s(π)_⟨J⟩`: every length-`horizon` plan whose `coalition` components
/// agree with `pattern`'s constraints.
pub fn plan_class<P: Probability>(
    game: &GameStructure<P>,
    pattern: &PlanPattern,
    coalition: AgentSet,
    horizon: usize,
) -> Result<PlanClass> {
    if pattern.steps.iter().any(|s| s.len() != game.agent_count()) {
        return Err(Error::Argument("plan arity does not match the model".into()));
    }
    if horizon < pattern.len() {
        return Err(Error::Argument(format!(
            "horizon {horizon} is shorter than the plan's {} steps",
            pattern.len()
        )));
    }
    let allowed = (0..horizon)
        .map(|pos| match pattern.constraint_at(pos, horizon) {
            None => game.joint_ids().collect(),
            Some(step) => game
                .joint_ids()
                .filter(|&j| {
                    let ja = game.joint_action(j);
                    step.iter().enumerate().all(|(agent, c)| match c {
                        Some(a) if coalition.contains(AgentId(agent)) => ja.0[agent] == *a,
                        _ => true,
                    })
                })
                .collect(),
        })
        .collect();
    Ok(PlanClass { allowed })
}

/// `π1 ∼_⟨J⟩ π2`: the coalition's actions agree at every step.
pub fn compatible<P: Probability>(game: &GameStructure<P>, a: &Trace, b: &Trace, coalition: AgentSet) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::Argument(format!(
            "plans of different lengths ({} and {})",
            a.len(),
            b.len()
        )));
    }
    Ok(a.0.iter().zip(&b.0).all(|(x, y)| {
        let (x, y) = (game.joint_action(*x), game.joint_action(*y));
        coalition.iter().all(|agent| x.0[agent.0] == y.0[agent.0])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Rational;
    use crate::testing::cpd;

    fn step(g: &GameStructure<Rational>, entries: &[&str]) -> PlanStep {
        entries
            .iter()
            .map(|e| if *e == "*" { None } else { g.action_id(e) })
            .collect()
    }

    fn labels(g: &GameStructure<Rational>, class: &PlanClass) -> Vec<String> {
        class
            .iter()
            .map(|t| t.0.iter().map(|j| g.joint_label(*j)).collect::<Vec<_>>().join(""))
            .collect()
    }

    #[test]
    fn single_agent_class_frees_the_others() {
        let g = cpd();
        let pi = PlanPattern::new(2, vec![step(&g, &["d", "d"])], false).unwrap();
        let a1 = AgentSet::singleton(AgentId(0));
        let class = plan_class(&g, &pi, a1, 1).unwrap();
        assert_eq!(labels(&g, &class), ["(d,c)", "(d,d)"]);
    }

    #[test]
    fn universal_pattern_gives_all_joint_actions() {
        let g = cpd();
        let class = plan_class(&g, &PlanPattern::universal(2), g.all_agents(), 1).unwrap();
        assert_eq!(class.len(), 4);
    }

    #[test]
    fn wildcard_prefix_is_suffix_anchored() {
        let g = cpd();
        let pi = PlanPattern::new(2, vec![step(&g, &["d", "c"])], true).unwrap();
        let class = plan_class(&g, &pi, AgentSet::singleton(AgentId(0)), 2).unwrap();
        assert_eq!(class.len(), 8);
        let d = g.action_id("d").unwrap();
        for t in class.iter() {
            assert_eq!(g.joint_action(t.0[1]).0[0], d);
        }
    }

    #[test]
    fn short_horizon_is_an_argument_error() {
        let g = cpd();
        let pi = PlanPattern::new(2, vec![step(&g, &["d", "c"]), step(&g, &["c", "c"])], false).unwrap();
        assert!(matches!(plan_class(&g, &pi, g.all_agents(), 1), Err(Error::Argument(_))));
    }

    #[test]
    fn full_coalition_fixes_a_complete_plan() {
        let g = cpd();
        let pi = PlanPattern::new(2, vec![step(&g, &["c", "d"]), step(&g, &["d", "d"])], false).unwrap();
        let class = plan_class(&g, &pi, g.all_agents(), 2).unwrap();
        assert_eq!(labels(&g, &class), ["(c,d)(d,d)"]);
    }

    #[test]
    fn compatibility_examples() {
        let g = cpd();
        let j = |a: &str, b: &str| g.joint_id(&[g.action_id(a).unwrap(), g.action_id(b).unwrap()]);
        let pi1 = Trace(vec![j("c", "d"), j("d", "c")]);
        let pi2 = Trace(vec![j("c", "c"), j("d", "d")]);
        let a1 = AgentSet::singleton(AgentId(0));
        assert!(compatible(&g, &pi1, &pi2, a1).unwrap());
        assert!(compatible(&g, &pi1, &pi1, g.all_agents()).unwrap());
        assert!(!compatible(&g, &Trace(vec![j("c", "c")]), &Trace(vec![j("d", "d")]), a1).unwrap());
        assert!(compatible(&g, &pi1, &Trace(vec![j("c", "c")]), a1).is_err());
    }

    #[test]
    fn pattern_coalition_is_derived() {
        let g = cpd();
        let pi = PlanPattern::new(2, vec![step(&g, &["d", "*"])], false).unwrap();
        assert_eq!(pi.coalition(), AgentSet::singleton(AgentId(0)));
        assert!(PlanPattern::new(2, vec![], false).is_err());
    }
}
