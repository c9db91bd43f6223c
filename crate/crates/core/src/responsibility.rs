//! Qualitative causal-responsibility checks and the history languages behind
//! the responsibility degrees.
//!
//! All plans and languages of a query share the length
//! `n = max(horizon(ψ), |π|)`. A "plan" below is a fully specified joint
//! plan; its histories are those whose trace equals it.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::logic::{CompiledHistory, HistoryFormula, ResponsibilityKind};
use crate::measures::{LanguageSummary, MeasuredLanguage};
use crate::model::{plan_class, walk_histories, walk_trace, AgentId, AgentSet, GameStructure, History, PlanClass, PlanPattern, StateId, Trace};
use crate::num::Probability;

/// A validated responsibility query with its outcome compiled.
pub(crate) struct Query<'a, P> {
    game: &'a GameStructure<P>,
    start: StateId,
    agent: AgentId,
    plan: &'a PlanPattern,
    outcome: CompiledHistory,
    length: usize,
}

impl<'a, P: Probability> Query<'a, P> {
    pub(crate) fn new(
        game: &'a GameStructure<P>,
        start: StateId,
        agent: AgentId,
        plan: &'a PlanPattern,
        outcome: &HistoryFormula,
    ) -> Result<Self> {
        game.check_state(start)?;
        game.check_agent(agent)?;
        if plan.steps().iter().any(|s| s.len() != game.agent_count()) {
            return Err(Error::Argument("plan arity does not match the model".into()));
        }
        if !plan.coalition().contains(agent) {
            return Err(Error::Argument(format!(
                "the plan does not constrain agent {}",
                game.agent_name(agent)
            )));
        }
        let outcome = CompiledHistory::compile(game, outcome)?;
        let length = outcome.horizon().max(plan.len());
        Ok(Query {
            game,
            start,
            agent,
            plan,
            outcome,
            length,
        })
    }

    pub(crate) fn with_length(mut self, length: usize) -> Result<Self> {
        if length < self.length {
            return Err(Error::Argument(format!(
                "length {length} is shorter than the required {}",
                self.length
            )));
        }
        self.length = length;
        Ok(self)
    }

    pub(crate) fn length(&self) -> usize {
        self.length
    }

    pub(crate) fn everything(&self) -> PlanClass {
        PlanClass::everything(self.game, self.length)
    }

    /// `Plan_s(π)_⟨J⟩` at the query length.
    pub(crate) fn class(&self, coalition: AgentSet) -> Result<PlanClass> {
        plan_class(self.game, self.plan, coalition, self.length)
    }

    fn satisfies(&self, h: &History) -> bool {
        self.outcome.eval_with(|i| h.state(i))
    }

    /// Summaries of the satisfying and violating histories of a plan class.
    pub(crate) fn split(&self, class: &PlanClass) -> Result<(LanguageSummary<P>, LanguageSummary<P>)> {
        let mut sat = LanguageSummary::empty(self.length);
        let mut viol = LanguageSummary::empty(self.length);
        let _ = walk_histories(self.game, self.start, class.allowed(), &mut |h: &History, p: &P| {
            if self.satisfies(h) {
                sat.add(p);
            } else {
                viol.add(p);
            }
            ControlFlow::Continue(())
        })?;
        Ok((sat, viol))
    }

    /// The histories of a plan class that satisfy (or violate) the outcome.
    pub(crate) fn collect(&self, class: &PlanClass, satisfying: bool) -> Result<MeasuredLanguage<P>> {
        let mut words = Vec::new();
        let mut probability = P::zero();
        let _ = walk_histories(self.game, self.start, class.allowed(), &mut |h: &History, p: &P| {
            if self.satisfies(h) == satisfying {
                words.push(h.clone());
                probability = probability.clone() + p.clone();
            }
            ControlFlow::Continue(())
        })?;
        Ok(MeasuredLanguage::from_parts(words, self.length, probability))
    }

    /// Every history of every plan in the class satisfies the outcome.
    fn all_satisfy(&self, class: &PlanClass) -> Result<bool> {
        let flow = walk_histories(self.game, self.start, class.allowed(), &mut |h: &History, _: &P| {
            if self.satisfies(h) {
                ControlFlow::Continue(())
            } else {
                ControlFlow::Break(())
            }
        })?;
        Ok(flow.is_continue())
    }

    /// The first plan of the class all of whose histories violate the outcome.
    fn violating_plan(&self, class: &PlanClass) -> Result<Option<Trace>> {
        for trace in class.iter() {
            let flow = walk_trace(self.game, self.start, &trace.0, &mut |h: &History, _: &P| {
                if self.satisfies(h) {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
            if flow.is_continue() {
                return Ok(Some(trace));
            }
        }
        Ok(None)
    }

    fn car(&self) -> Result<bool> {
        Ok(self.all_satisfy(&self.class(AgentSet::singleton(self.agent))?)?
            && self.violating_plan(&self.everything())?.is_some())
    }

    fn cpr(&self) -> Result<bool> {
        let all = self.game.all_agents();
        Ok(self.all_satisfy(&self.class(all)?)? && self.violating_plan(&self.class(all.without(self.agent))?)?.is_some())
    }

    fn ccr(&self) -> Result<Option<AgentSet>> {
        if !self.all_satisfy(&self.class(self.game.all_agents())?)? {
            return Ok(None);
        }
        for coalition in AgentSet::supersets_of(self.agent, self.game.agent_count()) {
            if self.all_satisfy(&self.class(coalition)?)?
                && self.violating_plan(&self.class(coalition.without(self.agent))?)?.is_some()
            {
                return Ok(Some(coalition));
            }
        }
        Ok(None)
    }
}

/// `s ⊨ CAR(i, π, ψ)`: every plan ⟨{i}⟩-compatible with π guarantees ψ,
/// while some full plan avoids it on all its histories.
pub fn check_car<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<bool> {
    Query::new(game, s, agent, plan, outcome)?.car()
}

/// `s ⊨ CPR(i, π, ψ)`: π guarantees ψ, and keeping the others' actions fixed
/// some deviation of i avoids it on all its histories.
pub fn check_cpr<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<bool> {
    Query::new(game, s, agent, plan, outcome)?.cpr()
}

/// `s ⊨ CCR(i, π, ψ)`.
pub fn check_ccr<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<bool> {
    Ok(ccr_witness(game, s, agent, plan, outcome)?.is_some())
}

/// The first coalition `J ∋ i`, by size and then lexicographically, that
/// witnesses contributive responsibility.
pub fn ccr_witness<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<Option<AgentSet>> {
    Query::new(game, s, agent, plan, outcome)?.ccr()
}

pub fn check<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    kind: ResponsibilityKind,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<bool> {
    match kind {
        ResponsibilityKind::Car => check_car(game, s, agent, plan, outcome),
        ResponsibilityKind::Cpr => check_cpr(game, s, agent, plan, outcome),
        ResponsibilityKind::Ccr => check_ccr(game, s, agent, plan, outcome),
    }
}

/// Positive and negative languages of one responsibility query.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponsibilityLanguages<P> {
    pub positive: MeasuredLanguage<P>,
    pub negative: MeasuredLanguage<P>,
    /// Whether the gating language is non-empty.
    pub kappa: bool,
    /// The coalition `J` for contributive responsibility.
    pub coalition: Option<AgentSet>,
}

/// `ℒ⁺` over plans ⟨{i}⟩-compatible with π satisfying ψ and `ℒ⁻` over all
/// full plans violating ψ; κ⁻ gates on `ℒ⁻`.
pub fn car_languages<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
    n: usize,
) -> Result<ResponsibilityLanguages<P>> {
    let q = Query::new(game, s, agent, plan, outcome)?.with_length(n)?;
    let positive = q.collect(&q.class(AgentSet::singleton(agent))?, true)?;
    let negative = q.collect(&q.everything(), false)?;
    Ok(ResponsibilityLanguages {
        kappa: !negative.is_empty(),
        positive,
        negative,
        coalition: None,
    })
}

/// `ℒ⁺` over plans ⟨Ag⟩-compatible with π satisfying ψ and `ℒ⁻` over plans
/// ⟨Ag∖{i}⟩-compatible with π violating ψ; κ⁺ gates on `ℒ⁺`.
pub fn cpr_languages<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
    n: usize,
) -> Result<ResponsibilityLanguages<P>> {
    let q = Query::new(game, s, agent, plan, outcome)?.with_length(n)?;
    let all = game.all_agents();
    let positive = q.collect(&q.class(all)?, true)?;
    let negative = q.collect(&q.class(all.without(agent))?, false)?;
    Ok(ResponsibilityLanguages {
        kappa: !positive.is_empty(),
        positive,
        negative,
        coalition: None,
    })
}

/// Per coalition `J ∋ i`: `ℒ^{J,+}` over plans ⟨J⟩-compatible with π
/// satisfying ψ and `ℒ^{J,−}` over plans ⟨J∖{i}⟩-compatible with π
/// violating ψ; κ^{J,−} gates on `ℒ^{J,−}`.
pub fn ccr_languages<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
    n: usize,
) -> Result<Vec<ResponsibilityLanguages<P>>> {
    let q = Query::new(game, s, agent, plan, outcome)?.with_length(n)?;
    AgentSet::supersets_of(agent, game.agent_count())
        .into_iter()
        .map(|coalition| {
            let positive = q.collect(&q.class(coalition)?, true)?;
            let negative = q.collect(&q.class(coalition.without(agent))?, false)?;
            Ok(ResponsibilityLanguages {
                kappa: !negative.is_empty(),
                positive,
                negative,
                coalition: Some(coalition),
            })
        })
        .collect()
}

/// The query length `max(horizon(ψ), |π|)` used by checks and degrees.
pub fn query_length(plan: &PlanPattern, outcome: &HistoryFormula) -> usize {
    outcome.horizon().max(plan.len())
}
