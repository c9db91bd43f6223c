use std::collections::BTreeMap;
use std::fmt;

use crate::model::{AgentId, AgentSet, PlanPattern, PropId};
use crate::num::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    Le,
    Lt,
    Ge,
    Gt,
}

impl Comparison {
    pub fn holds<T: PartialOrd>(self, lhs: &T, rhs: &T) -> bool {
        match self {
            Comparison::Le => lhs <= rhs,
            Comparison::Lt => lhs < rhs,
            Comparison::Ge => lhs >= rhs,
            Comparison::Gt => lhs > rhs,
        }
    }

    /// Whether the existential reading is decided by the maximal probability.
    pub fn is_lower_bound(self) -> bool {
        matches!(self, Comparison::Ge | Comparison::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparison::Le => "<=",
            Comparison::Lt => "<",
            Comparison::Ge => ">=",
            Comparison::Gt => ">",
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResponsibilityKind {
    /// Causal active responsibility.
    Car,
    /// Causal passive responsibility.
    Cpr,
    /// Causal contributive responsibility.
    Ccr,
}

impl ResponsibilityKind {
    pub const ALL: [ResponsibilityKind; 3] = [ResponsibilityKind::Car, ResponsibilityKind::Cpr, ResponsibilityKind::Ccr];

    pub fn keyword(self) -> &'static str {
        match self {
            ResponsibilityKind::Car => "CAR",
            ResponsibilityKind::Cpr => "CPR",
            ResponsibilityKind::Ccr => "CCR",
        }
    }
}

impl fmt::Display for ResponsibilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl std::str::FromStr for ResponsibilityKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CAR" => Ok(ResponsibilityKind::Car),
            "CPR" => Ok(ResponsibilityKind::Cpr),
            "CCR" => Ok(ResponsibilityKind::Ccr),
            _ => Err(crate::Error::unknown("responsibility kind", s)),
        }
    }
}

/// Formulae evaluated at a state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StateFormula {
    True,
    Atom(PropId),
    Not(Box<StateFormula>),
    And(Box<StateFormula>, Box<StateFormula>),
    /// `⟨A⟩[ψ]`: the coalition can enforce ψ.
    Coalition(AgentSet, Box<HistoryFormula>),
    /// `P⋈p ⟨A⟩[ψ]`.
    ProbBound {
        comparison: Comparison,
        bound: Rational,
        coalition: AgentSet,
        path: Box<HistoryFormula>,
    },
    Responsibility {
        kind: ResponsibilityKind,
        agent: AgentId,
        plan: PlanPattern,
        outcome: Box<HistoryFormula>,
    },
}

/// Formulae evaluated on a history.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HistoryFormula {
    Next(Box<StateFormula>),
    /// `φ U≤k φ′`.
    Until(Box<StateFormula>, usize, Box<StateFormula>),
    Not(Box<HistoryFormula>),
    And(Box<HistoryFormula>, Box<HistoryFormula>),
}

impl StateFormula {
    pub fn falsum() -> Self {
        StateFormula::True.not()
    }

    pub fn atom(prop: PropId) -> Self {
        StateFormula::Atom(prop)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        StateFormula::Not(Box::new(self))
    }

    pub fn and(self, other: StateFormula) -> Self {
        StateFormula::And(Box::new(self), Box::new(other))
    }

    /// Disjunction, encoded by De Morgan.
    pub fn or(self, other: StateFormula) -> Self {
        self.not().and(other.not()).not()
    }

    /// Whether the formula consists of atoms and boolean connectives only.
    pub fn is_propositional(&self) -> bool {
        match self {
            StateFormula::True | StateFormula::Atom(_) => true,
            StateFormula::Not(f) => f.is_propositional(),
            StateFormula::And(a, b) => a.is_propositional() && b.is_propositional(),
            _ => false,
        }
    }

    /// Steps of lookahead needed by nested path quantifiers.
    pub fn horizon(&self) -> usize {
        match self {
            StateFormula::True | StateFormula::Atom(_) => 0,
            StateFormula::Not(f) => f.horizon(),
            StateFormula::And(a, b) => a.horizon().max(b.horizon()),
            StateFormula::Coalition(_, psi) => psi.horizon(),
            StateFormula::ProbBound { path, .. } => path.horizon(),
            StateFormula::Responsibility { plan, outcome, .. } => outcome.horizon().max(plan.len()),
        }
    }
}

impl HistoryFormula {
    pub fn next(phi: StateFormula) -> Self {
        HistoryFormula::Next(Box::new(phi))
    }

    pub fn until(phi: StateFormula, bound: usize, psi: StateFormula) -> Self {
        HistoryFormula::Until(Box::new(phi), bound, Box::new(psi))
    }

    /// `F≤k φ ≜ true U≤k φ`.
    pub fn finally(bound: usize, phi: StateFormula) -> Self {
        HistoryFormula::until(StateFormula::True, bound, phi)
    }

    /// `G≤k φ ≜ ¬F≤k ¬φ`.
    pub fn globally(bound: usize, phi: StateFormula) -> Self {
        HistoryFormula::finally(bound, phi.not()).not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        HistoryFormula::Not(Box::new(self))
    }

    pub fn and(self, other: HistoryFormula) -> Self {
        HistoryFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: HistoryFormula) -> Self {
        self.not().and(other.not()).not()
    }

    /// Minimal number of steps needed to decide the formula.
    pub fn horizon(&self) -> usize {
        match self {
            HistoryFormula::Next(phi) => 1 + phi.horizon(),
            HistoryFormula::Until(a, k, b) => k + a.horizon().max(b.horizon()),
            HistoryFormula::Not(f) => f.horizon(),
            HistoryFormula::And(a, b) => a.horizon().max(b.horizon()),
        }
    }
}

/// Named propositional abbreviations such as `reward ≜ c1 ∧ c2`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Definitions(BTreeMap<String, StateFormula>);

impl Definitions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, name: &str) -> Option<&StateFormula> {
        self.0.get(name)
    }

    pub fn insert(&mut self, name: String, formula: StateFormula) {
        self.0.insert(name, formula);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &StateFormula)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}
