//! Counting, probability and entropy measures of history languages, and the
//! responsibility degrees built from them.
//!
//! Every degree is a ratio `Y(numerator) / Y(reference)` gated by a κ flag.
//! The entropy ratio uses finite-horizon entropy `log₂(1+|L|)/n`; since both
//! languages share the length `n`, the lengths cancel.

use std::fmt;

use crate::error::{Error, Result};
use crate::logic::{HistoryFormula, ResponsibilityKind};
use crate::model::{history_probability, AgentId, AgentSet, GameStructure, History, PlanPattern, StateId};
use crate::num::{Probability, Rational};
use crate::responsibility::Query;

/// `log₂(1 + cardinality) / length`, and 0 for the empty horizon.
pub fn finite_horizon_entropy(cardinality: u128, length: usize) -> f64 {
    if length == 0 {
        0.0
    } else {
        (1.0 + cardinality as f64).log2() / length as f64
    }
}

/// Ratio of finite-horizon entropies of two languages of equal length.
pub fn entropy_ratio(numerator: u128, reference: u128) -> f64 {
    (1.0 + numerator as f64).log2() / (1.0 + reference as f64).log2()
}

/// Cardinality and probability of a language, without its words.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageSummary<P> {
    pub length: usize,
    pub cardinality: u128,
    pub probability: P,
}

impl<P: Probability> LanguageSummary<P> {
    pub fn empty(length: usize) -> Self {
        LanguageSummary {
            length,
            cardinality: 0,
            probability: P::zero(),
        }
    }

    pub(crate) fn add(&mut self, probability: &P) {
        self.cardinality += 1;
        self.probability = self.probability.clone() + probability.clone();
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    pub fn entropy_fh(&self) -> f64 {
        finite_horizon_entropy(self.cardinality, self.length)
    }
}

/// A finite, length-uniform set of histories with its measures. Words are
/// kept in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredLanguage<P> {
    words: Vec<History>,
    length: usize,
    probability: P,
}

impl<P: Probability> MeasuredLanguage<P> {
    pub(crate) fn from_parts(words: Vec<History>, length: usize, probability: P) -> Self {
        MeasuredLanguage {
            words,
            length,
            probability,
        }
    }

    pub fn words(&self) -> &[History] {
        &self.words
    }

    pub fn into_words(self) -> Vec<History> {
        self.words
    }

    /// Common length of the words; also their maximal length.
    pub fn length(&self) -> usize {
        self.length
    }

    pub fn cardinality(&self) -> u128 {
        self.words.len() as u128
    }

    pub fn probability(&self) -> &P {
        &self.probability
    }

    pub fn entropy_fh(&self) -> f64 {
        finite_horizon_entropy(self.cardinality(), self.length)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, history: &History) -> bool {
        self.words.binary_search(history).is_ok()
    }

    pub fn summary(&self) -> LanguageSummary<P> {
        LanguageSummary {
            length: self.length,
            cardinality: self.cardinality(),
            probability: self.probability.clone(),
        }
    }
}

/// Measures a set of histories of one common length. An empty set gets length 0.
pub fn measure<P: Probability>(game: &GameStructure<P>, words: Vec<History>) -> Result<MeasuredLanguage<P>> {
    let length = words.first().map_or(0, History::len);
    if let Some(bad) = words.iter().find(|h| h.len() != length) {
        return Err(Error::Argument(format!(
            "language mixes histories of length {length} and {}",
            bad.len()
        )));
    }
    let mut words = words;
    words.sort();
    words.dedup();
    let mut probability = P::zero();
    for h in &words {
        probability = probability + history_probability(game, h)?;
    }
    Ok(MeasuredLanguage::from_parts(words, length, probability))
}

/// Contribution of one coalition `J ∋ i` to a contributive-responsibility degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CoalitionTerm<P> {
    pub coalition: AgentSet,
    /// `ℒ^{J,+}`: histories of plans ⟨J⟩-compatible with π satisfying the outcome.
    pub positive: LanguageSummary<P>,
    /// `ℒ^{J,−}`: histories of plans ⟨J∖{i}⟩-compatible with π violating it.
    pub negative: LanguageSummary<P>,
    pub kappa: bool,
    /// Whether the term enters the average (`|ℒ^{J,+}| > 0` and `κ^{J,−} = 1`).
    pub contributes: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeReport<P> {
    pub kind: ResponsibilityKind,
    /// Common history length of all languages involved.
    pub length: usize,
    pub count_degree: Rational,
    pub prob_degree: P,
    pub entropy_degree: f64,
    pub kappa: bool,
    /// Numerator language: `ℒ⁺` for CAR, `ℒ⁻` for CPR, and for CCR the
    /// `ℒ^{J,+}` of the first contributing coalition (empty if none).
    pub responsible: LanguageSummary<P>,
    /// Gating language deciding κ: `ℒ⁻` for CAR, `ℒ⁺` for CPR.
    pub gate: Option<LanguageSummary<P>>,
    /// Denominator language: `ℒ_φ` for CAR and CCR, `ℒ_¬φ` for CPR.
    pub reference: LanguageSummary<P>,
    pub coalitions: Vec<CoalitionTerm<P>>,
    pub note: Option<String>,
}

impl<P: Probability> DegreeReport<P> {
    fn zero(kind: ResponsibilityKind, length: usize, reference: LanguageSummary<P>) -> Self {
        DegreeReport {
            kind,
            length,
            count_degree: Rational::from_integer(0.into()),
            prob_degree: P::zero(),
            entropy_degree: 0.0,
            kappa: false,
            responsible: LanguageSummary::empty(length),
            gate: None,
            reference,
            coalitions: Vec::new(),
            note: None,
        }
    }
}

impl<P: Probability> fmt::Display for DegreeReport<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::num::Exact;
        writeln!(f, "kind = {}", self.kind)?;
        writeln!(f, "length = {}", self.length)?;
        writeln!(f, "kappa = {}", u8::from(self.kappa))?;
        writeln!(f, "count_degree = {}", Exact(&self.count_degree))?;
        writeln!(f, "prob_degree = {}", Exact(&self.prob_degree))?;
        writeln!(f, "entropy_degree = {}", self.entropy_degree)?;
        writeln!(f, "responsible_count = {}", self.responsible.cardinality)?;
        writeln!(f, "reference_count = {}", self.reference.cardinality)?;
        if let Some(note) = &self.note {
            writeln!(f, "note = {note}")?;
        }
        Ok(())
    }
}

fn ratio(num: u128, den: u128) -> Rational {
    Rational::new(num.into(), den.into())
}

fn check_reference<P: Probability>(reference: &LanguageSummary<P>, empty: Error) -> Result<()> {
    if reference.is_empty() {
        return Err(empty);
    }
    if !reference.probability.is_positive() {
        return Err(Error::ZeroProbability);
    }
    Ok(())
}

/// `𝒟_CAR(i, π, φ) = Y(ℒ⁺)/Y(ℒ_φ) · κ⁻`.
pub fn degree_car<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<DegreeReport<P>> {
    let q = Query::new(game, s, agent, plan, outcome)?;
    let n = q.length();
    let (satisfying, violating) = q.split(&q.everything())?;
    let kind = ResponsibilityKind::Car;
    if violating.is_empty() {
        let mut report = DegreeReport::zero(kind, n, satisfying);
        report.gate = Some(violating);
        report.note = Some("outcome is unavoidable (kappa = 0)".into());
        return Ok(report);
    }
    check_reference(&satisfying, Error::OutcomeUnsatisfiable { length: n })?;
    let (positive, _) = q.split(&q.class(AgentSet::singleton(agent))?)?;
    Ok(DegreeReport {
        kind,
        length: n,
        count_degree: ratio(positive.cardinality, satisfying.cardinality),
        prob_degree: positive.probability.clone() / satisfying.probability.clone(),
        entropy_degree: entropy_ratio(positive.cardinality, satisfying.cardinality),
        kappa: true,
        responsible: positive,
        gate: Some(violating),
        reference: satisfying,
        coalitions: Vec::new(),
        note: None,
    })
}

/// `𝒟_CPR(i, π, φ) = Y(ℒ⁻)/Y(ℒ_¬φ) · κ⁺`.
pub fn degree_cpr<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<DegreeReport<P>> {
    let q = Query::new(game, s, agent, plan, outcome)?;
    let n = q.length();
    let (_, violating) = q.split(&q.everything())?;
    let (positive, _) = q.split(&q.class(game.all_agents())?)?;
    let kind = ResponsibilityKind::Cpr;
    if positive.is_empty() {
        let mut report = DegreeReport::zero(kind, n, violating);
        report.gate = Some(positive);
        report.note = Some("outcome is unattainable under the plan (kappa = 0)".into());
        return Ok(report);
    }
    check_reference(&violating, Error::OutcomeUnavoidable { length: n })?;
    let (_, negative) = q.split(&q.class(game.all_agents().without(agent))?)?;
    Ok(DegreeReport {
        kind,
        length: n,
        count_degree: ratio(negative.cardinality, violating.cardinality),
        prob_degree: negative.probability.clone() / violating.probability.clone(),
        entropy_degree: entropy_ratio(negative.cardinality, violating.cardinality),
        kappa: true,
        responsible: negative,
        gate: Some(positive),
        reference: violating,
        coalitions: Vec::new(),
        note: None,
    })
}

/// `𝒟_CCR(i, π, φ)`: the average of `Y(ℒ^{J,+})/Y(ℒ_φ)` over the coalitions
/// `J ∋ i` with `|ℒ^{J,+}| > 0` and `κ^{J,−} = 1`; 0 when there is none.
pub fn degree_ccr<P: Probability>(
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<DegreeReport<P>> {
    let q = Query::new(game, s, agent, plan, outcome)?;
    let n = q.length();
    let (satisfying, _) = q.split(&q.everything())?;
    let mut terms = Vec::new();
    for coalition in AgentSet::supersets_of(agent, game.agent_count()) {
        let (positive, _) = q.split(&q.class(coalition)?)?;
        let (_, negative) = q.split(&q.class(coalition.without(agent))?)?;
        let kappa = !negative.is_empty();
        terms.push(CoalitionTerm {
            coalition,
            contributes: kappa && !positive.is_empty(),
            positive,
            negative,
            kappa,
        });
    }
    let contributing: Vec<&CoalitionTerm<P>> = terms.iter().filter(|t| t.contributes).collect();
    let kind = ResponsibilityKind::Ccr;
    if contributing.is_empty() {
        let mut report = DegreeReport::zero(kind, n, satisfying);
        report.coalitions = terms;
        report.note = Some("no coalition containing the agent both achieves the outcome and can avoid it without the agent".into());
        return Ok(report);
    }
    check_reference(&satisfying, Error::OutcomeUnsatisfiable { length: n })?;
    let m = contributing.len();
    let count_sum: u128 = contributing.iter().map(|t| t.positive.cardinality).sum();
    let prob_sum = contributing
        .iter()
        .fold(P::zero(), |acc, t| acc + t.positive.probability.clone());
    let entropy_sum: f64 = contributing
        .iter()
        .map(|t| entropy_ratio(t.positive.cardinality, satisfying.cardinality))
        .sum();
    let members = (0..m).fold(P::zero(), |acc, _| acc + P::one());
    let responsible = contributing[0].positive.clone();
    Ok(DegreeReport {
        kind,
        length: n,
        count_degree: Rational::new(count_sum.into(), (satisfying.cardinality * m as u128).into()),
        prob_degree: prob_sum / satisfying.probability.clone() / members,
        entropy_degree: entropy_sum / m as f64,
        kappa: true,
        responsible,
        gate: None,
        reference: satisfying,
        coalitions: terms,
        note: None,
    })
}

pub fn degree<P: Probability>(
    kind: ResponsibilityKind,
    game: &GameStructure<P>,
    s: StateId,
    agent: AgentId,
    plan: &PlanPattern,
    outcome: &HistoryFormula,
) -> Result<DegreeReport<P>> {
    match kind {
        ResponsibilityKind::Car => degree_car(game, s, agent, plan, outcome),
        ResponsibilityKind::Cpr => degree_cpr(game, s, agent, plan, outcome),
        ResponsibilityKind::Ccr => degree_ccr(game, s, agent, plan, outcome),
    }
}
