//! The prisoners' dilemma walk-through: model, logic, responsibility verdicts
//! and degrees on the bundled fixture.

mod common;

use num_traits::{One, Zero};
use respcheck_core::logic::{
    check_coalition, check_prob_bound, eval_history, eval_state, parse_outcome_with, parse_plan,
    parse_state_formula_with, satisfying_language, Comparison, HistoryFormula, ResponsibilityKind, StateFormula,
};
use respcheck_core::measures::{degree, degree_car, degree_ccr, degree_cpr, measure};
use respcheck_core::model::text::ModelFile;
use respcheck_core::model::{
    compatible, enumerate_histories, history_probability, plan_class, trace_of, AgentSet, History, JointId,
    PlanPattern, StateId, Step, Trace,
};
use respcheck_core::responsibility::{
    car_languages, ccr_witness, check_car, check_ccr, check_cpr, cpr_languages, query_length,
};
use respcheck_core::testing::cpd_file;
use respcheck_core::{Error, ExactGame, Rational};

struct Fixture {
    file: ModelFile,
    game: ExactGame,
}

fn uniform() -> Fixture {
    let file = cpd_file();
    Fixture {
        game: file.game.clone(),
        file,
    }
}

fn biased() -> Fixture {
    let file = cpd_file();
    Fixture {
        game: file.game_with_profile(Some("biased")).unwrap(),
        file,
    }
}

impl Fixture {
    fn outcome(&self, text: &str) -> HistoryFormula {
        parse_outcome_with(&self.game, &self.file.definitions, text).unwrap()
    }

    fn state_formula(&self, text: &str) -> StateFormula {
        parse_state_formula_with(&self.game, &self.file.definitions, text).unwrap()
    }

    fn plan(&self, text: &str) -> PlanPattern {
        parse_plan(&self.game, text).unwrap()
    }

    fn s(&self, name: &str) -> StateId {
        self.game.state(name).unwrap()
    }

    fn joint(&self, a1: &str, a2: &str) -> JointId {
        let a = |x: &str| self.game.action_id(x).unwrap();
        self.game.joint_id(&[a(a1), a(a2)])
    }

    fn history(&self, moves: &[(&str, &str, &str)]) -> History {
        let steps = moves
            .iter()
            .map(|(a1, a2, t)| Step {
                action: self.joint(a1, a2),
                target: self.s(t),
            })
            .collect();
        History::from_steps(&self.game, self.s("s0"), steps).unwrap()
    }

    fn a1(&self) -> respcheck_core::model::AgentId {
        self.game.agent("A1").unwrap()
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pow(b: u64, e: usize) -> f64 {
    (b as f64).powi(e as i32)
}

#[test]
fn joint_actions_decide_the_successor() {
    let f = uniform();
    let s0 = f.s("s0");
    assert_eq!(f.game.successors(s0, f.joint("c", "c")).unwrap(), &[(f.s("s1"), Rational::one())]);
    assert_eq!(f.game.successors(s0, f.joint("d", "d")).unwrap(), &[(s0, Rational::one())]);
    for s in 0..4 {
        assert_eq!(f.game.successors(StateId(s), f.joint("c", "d")).unwrap()[0].0, f.s("s2"));
    }
}

#[test]
fn history_counts_and_probabilities() {
    let f = uniform();
    let s0 = f.s("s0");
    assert_eq!(enumerate_histories(&f.game, s0, 0).unwrap(), vec![History::new(s0)]);
    assert_eq!(enumerate_histories(&f.game, s0, 1).unwrap().len(), 4);
    assert_eq!(enumerate_histories(&f.game, s0, 2).unwrap().len(), 16);
    let one_step = enumerate_histories(&f.game, s0, 1).unwrap();
    for h in &one_step {
        assert_eq!(history_probability(&f.game, h).unwrap(), q(1, 4));
    }
    assert_eq!(history_probability(&f.game, &History::new(s0)).unwrap(), Rational::one());

    let b = biased();
    let rho = b.history(&[("d", "d", "s0")]);
    assert_eq!(history_probability(&b.game, &rho).unwrap(), q(1, 16));
}

#[test]
fn traces_erase_states() {
    let f = uniform();
    let rho = f.history(&[("c", "d", "s2"), ("d", "c", "s3")]);
    assert_eq!(trace_of(&rho), Trace(vec![f.joint("c", "d"), f.joint("d", "c")]));
    assert!(trace_of(&History::new(f.s("s0"))).is_empty());
}

#[test]
fn plan_classes() {
    let f = uniform();
    let dd = f.plan("(d,d)");
    let class = plan_class(&f.game, &dd, AgentSet::singleton(f.a1()), 1).unwrap();
    let plans: Vec<Trace> = class.iter().collect();
    assert_eq!(plans, vec![Trace(vec![f.joint("d", "c")]), Trace(vec![f.joint("d", "d")])]);

    let universal = PlanPattern::universal(2);
    assert_eq!(plan_class(&f.game, &universal, f.game.all_agents(), 1).unwrap().len(), 4);

    let suffix = f.plan("...; (d,c)");
    let class = plan_class(&f.game, &suffix, AgentSet::singleton(f.a1()), 2).unwrap();
    assert_eq!(class.len(), 8);
    assert!(class.iter().all(|t| f.game.joint_action(t.0[1]).0[0] == f.game.action_id("d").unwrap()));

    assert!(matches!(plan_class(&f.game, &f.plan("(c,c);(d,d)"), f.game.all_agents(), 1), Err(Error::Argument(_))));
}

#[test]
fn compatibility_examples() {
    let f = uniform();
    let pi1 = Trace(vec![f.joint("c", "d"), f.joint("d", "c")]);
    let pi2 = Trace(vec![f.joint("c", "c"), f.joint("d", "d")]);
    let a1 = AgentSet::singleton(f.a1());
    assert!(compatible(&f.game, &pi1, &pi2, a1).unwrap());
    assert!(!compatible(&f.game, &Trace(vec![f.joint("c", "c")]), &Trace(vec![f.joint("d", "d")]), a1).unwrap());
    assert!(compatible(&f.game, &pi1, &pi1, f.game.all_agents()).unwrap());
}

#[test]
fn parsing_paper_formulae() {
    let f = uniform();
    let reward = f.state_formula("reward");
    let phi = f.state_formula("<A1,A2> [ X reward ]");
    assert_eq!(phi, StateFormula::Coalition(f.game.all_agents(), Box::new(HistoryFormula::next(reward))));
    let fine = f.state_formula("fine");
    assert_eq!(f.outcome("F<=2 fine"), HistoryFormula::until(StateFormula::True, 2, fine));
    assert_eq!(f.outcome("X reward").horizon(), 1);
    assert_eq!(f.outcome("F<=2 fine").horizon(), 2);
    assert_eq!(f.outcome("G<=7 (fine | reward)").horizon(), 7);
}

#[test]
fn history_semantics() {
    let f = uniform();
    let xr = f.outcome("X reward");
    assert!(eval_history(&f.game, &f.history(&[("c", "c", "s1")]), &xr).unwrap());
    assert!(!eval_history(&f.game, &f.history(&[("d", "d", "s0")]), &xr).unwrap());
    assert!(matches!(
        eval_history(&f.game, &History::new(f.s("s0")), &xr),
        Err(Error::HistoryTooShort { length: 0, horizon: 1 })
    ));
    // The bounded future starts one step ahead: a zero bound is never met,
    // even when the start state already satisfies the target.
    let zero_bound = f.outcome("true U<=0 fine");
    assert!(!eval_history(&f.game, &History::new(f.s("s0")), &zero_bound).unwrap());
    let one = f.outcome("F<=1 fine");
    assert!(!eval_history(&f.game, &f.history(&[("c", "c", "s1")]), &one).unwrap());
    assert!(eval_history(&f.game, &f.history(&[("d", "d", "s0")]), &one).unwrap());
}

#[test]
fn state_semantics_and_strategies() {
    let f = uniform();
    let s0 = f.s("s0");
    assert!(eval_state(&f.game, f.s("s1"), &f.state_formula("cooperative1")).unwrap());
    assert!(!eval_state(&f.game, f.s("s3"), &f.state_formula("cooperative1")).unwrap());
    assert!(eval_state(&f.game, s0, &f.state_formula("<A1,A2>[X reward]")).unwrap());
    let xr = f.outcome("X reward");
    assert!(check_coalition(&f.game, s0, f.game.all_agents(), &xr).unwrap());
    assert!(!check_coalition(&f.game, s0, AgentSet::singleton(f.a1()), &xr).unwrap());
    assert!(check_coalition(&f.game, s0, f.game.all_agents(), &f.outcome("X true")).unwrap());

    let all = f.game.all_agents();
    let none = AgentSet::default();
    assert!(check_prob_bound(&f.game, s0, all, &xr, Comparison::Ge, &Rational::one()).unwrap());
    assert!(check_prob_bound(&f.game, s0, none, &xr, Comparison::Ge, &q(1, 4)).unwrap());
    assert!(!check_prob_bound(&f.game, s0, none, &xr, Comparison::Gt, &q(1, 4)).unwrap());
    assert!(check_prob_bound(&f.game, s0, none, &f.outcome("X !reward"), Comparison::Ge, &Rational::zero()).unwrap());
    assert!(eval_state(&f.game, s0, &f.state_formula("P>=1/4 <>[X reward]")).unwrap());
}

#[test]
fn alternating_language_size() {
    let f = uniform();
    for t in 1..=8 {
        let psi = f.outcome(&format!("G<={t} (fine | reward)"));
        let l = satisfying_language(&f.game, f.s("s0"), &psi, t).unwrap();
        assert_eq!(l.cardinality(), 1 << t);
        assert_eq!(l.probability(), &q(1, 1 << t));
        let expected = (1.0 + pow(2, t)).log2() / t as f64;
        assert!((l.entropy_fh() - expected).abs() < 1e-12);
        assert!(l.words().iter().all(|h| h.steps().iter().all(|s| s.target == f.s("s0") || s.target == f.s("s1"))));
    }
    let f = uniform();
    assert_eq!(satisfying_language(&f.game, f.s("s0"), &f.outcome("X true"), 1).unwrap().cardinality(), 4);
    let contradiction = f.outcome("X reward & !X reward");
    assert!(satisfying_language(&f.game, f.s("s0"), &contradiction, 1).unwrap().is_empty());
    assert!(matches!(
        satisfying_language(&f.game, f.s("s0"), &f.outcome("F<=3 reward"), 2),
        Err(Error::HistoryTooShort { length: 2, horizon: 3 })
    ));
}

#[test]
fn measures_of_small_languages() {
    let f = uniform();
    let empty = measure(&f.game, Vec::new()).unwrap();
    assert_eq!((empty.cardinality(), empty.probability().clone(), empty.entropy_fh()), (0, Rational::zero(), 0.0));
    let all = measure(&f.game, enumerate_histories(&f.game, f.s("s0"), 1).unwrap()).unwrap();
    assert_eq!(all.cardinality(), 4);
    assert!(all.probability().is_one());
    assert!((all.entropy_fh() - 5f64.log2()).abs() < 1e-12);
    let mixed = vec![History::new(f.s("s0")), f.history(&[("c", "c", "s1")])];
    assert!(matches!(measure(&f.game, mixed), Err(Error::Argument(_))));
}

#[test]
fn active_responsibility_verdicts() {
    let f = uniform();
    let (s0, a1) = (f.s("s0"), f.a1());
    let psi = f.outcome("<A1,A2> X (fine | payoff2)");
    assert!(check_car(&f.game, s0, a1, &f.plan("(d,d)"), &psi).unwrap());
    assert!(!check_car(&f.game, s0, a1, &f.plan("(c,c)"), &psi).unwrap());
    assert!(!check_car(&f.game, s0, a1, &f.plan("(d,d)"), &f.outcome("X true")).unwrap());
    assert!(matches!(
        check_car(&f.game, s0, a1, &f.plan("(*,d)"), &psi),
        Err(Error::Argument(_))
    ));
}

#[test]
fn passive_responsibility_verdicts() {
    let f = uniform();
    let (s0, a1) = (f.s("s0"), f.a1());
    let psi = f.outcome("<A1,A2> X reward");
    assert!(check_cpr(&f.game, s0, a1, &f.plan("(c,c)"), &psi).unwrap());
    assert!(!check_cpr(&f.game, s0, a1, &f.plan("(d,c)"), &psi).unwrap());
    assert!(!check_cpr(&f.game, s0, a1, &f.plan("(c,c)"), &f.outcome("X true")).unwrap());
}

#[test]
fn contributive_responsibility_verdicts() {
    let f = uniform();
    let (s0, a1) = (f.s("s0"), f.a1());
    let psi = f.outcome("<A1,A2> F<=2 fine");
    let pi = f.plan("(c,d); (d,d)");
    assert!(check_ccr(&f.game, s0, a1, &pi, &psi).unwrap());
    assert_eq!(ccr_witness(&f.game, s0, a1, &pi, &psi).unwrap(), Some(f.game.all_agents()));
    assert!(!check_ccr(&f.game, s0, a1, &f.plan("(c,c); (c,c)"), &psi).unwrap());

    // An agent whose action never matters cannot contribute.
    let m = ModelFile::parse(
        "agents A B\nactions a b\nprops p\nstate s0 {}\nstate s1 {p}\n\
         trans * (a,a) -> s1 : 1\ntrans * (b,a) -> s1 : 1\n\
         trans * (a,b) -> s0 : 1\ntrans * (b,b) -> s0 : 1\n",
    )
    .unwrap();
    let g = &m.game;
    let psi = parse_outcome_with(g, &m.definitions, "X p").unwrap();
    let pi = parse_plan(g, "(a,a)").unwrap();
    let a = g.agent("A").unwrap();
    assert!(!check_ccr(g, g.state("s0").unwrap(), a, &pi, &psi).unwrap());
    let b = g.agent("B").unwrap();
    assert!(check_ccr(g, g.state("s0").unwrap(), b, &pi, &psi).unwrap());
}

#[test]
fn responsibility_languages() {
    let f = biased();
    let (s0, a1) = (f.s("s0"), f.a1());
    let pi = f.plan("(d,c)");
    let psi = f.outcome("<A1,A2> X (fine | payoff2)");
    let l = car_languages(&f.game, s0, a1, &pi, &psi, query_length(&pi, &psi)).unwrap();
    let traces = |words: &[History]| words.iter().map(trace_of).collect::<Vec<_>>();
    let t = |a: &str, b: &str| Trace(vec![f.joint(a, b)]);
    assert_eq!(traces(l.positive.words()), vec![t("d", "c"), t("d", "d")]);
    assert_eq!(traces(l.negative.words()), vec![t("c", "c"), t("c", "d")]);
    assert!(l.kappa);

    let tautology = car_languages(&f.game, s0, a1, &pi, &f.outcome("X true"), 1).unwrap();
    assert!(tautology.negative.is_empty() && !tautology.kappa);

    let u = uniform();
    let pi = u.plan("...; (c,c)");
    let psi = u.outcome("F<=2 reward");
    let l = cpr_languages(&u.game, s0, a1, &pi, &psi, 2).unwrap();
    assert_eq!(l.negative.cardinality(), 3);
    assert_eq!(l.positive.cardinality(), 4);
}

#[test]
fn full_active_responsibility() {
    let f = biased();
    let r = degree_car(&f.game, f.s("s0"), f.a1(), &f.plan("(d,c)"), &f.outcome("<A1,A2> X (fine | payoff2)")).unwrap();
    assert!(r.count_degree.is_one() && r.prob_degree.is_one());
    assert!((r.entropy_degree - 1.0).abs() < 1e-9);
}

/// L_φ: A2 cooperates at least once (4^t − 2^t histories); L⁺: A1 defects
/// last, minus those where A2 never cooperates (2·4^(t−1) − 2^(t−1)).
fn partial_active_entropy(t: usize) -> f64 {
    let positive = 2.0 * pow(4, t - 1) - pow(2, t - 1);
    let reference = pow(4, t) - pow(2, t);
    (1.0 + positive).log2() / (1.0 + reference).log2()
}

#[test]
fn partial_active_responsibility_over_time() {
    let f = biased();
    for t in 2..=8 {
        let psi = f.outcome(&format!("<A1,A2> F<={t} (reward | payoff2)"));
        let r = degree_car(&f.game, f.s("s0"), f.a1(), &f.plan("...; (d,c)"), &psi).unwrap();
        assert_eq!(r.count_degree, q(1, 2), "t={t}");
        assert_eq!(r.prob_degree, q(1, 4), "t={t}");
        assert!((r.entropy_degree - partial_active_entropy(t)).abs() < 1e-9, "t={t}");
        let oracle = common::Query {
            game: &f.game,
            start: 0,
            agent: 0,
            plan: &f.plan("...; (d,c)"),
            outcome: &psi,
        };
        if t <= 5 {
            assert_eq!(
                oracle.degree(ResponsibilityKind::Car),
                common::Outcome::Degrees {
                    count: r.count_degree.clone(),
                    prob: r.prob_degree.clone(),
                    entropy: partial_active_entropy(t)
                }
            );
        }
    }
}

#[test]
fn passive_responsibility_over_time() {
    let f = uniform();
    for t in 2..=8 {
        let psi = f.outcome(&format!("<A1,A2> F<={t} reward"));
        let r = degree_cpr(&f.game, f.s("s0"), f.a1(), &f.plan("...; (c,c)"), &psi).unwrap();
        assert_eq!(r.count_degree, q(1, 3), "t={t}");
        assert_eq!(r.prob_degree, q(1, 3), "t={t}");
        let expected = (1.0 + pow(3, t - 1)).log2() / (1.0 + pow(3, t)).log2();
        assert!((r.entropy_degree - expected).abs() < 1e-9, "t={t}");

        let alternative = f.plan(&format!("(d,c)^{t}"));
        let r = degree_cpr(&f.game, f.s("s0"), f.a1(), &alternative, &psi).unwrap();
        assert!(r.count_degree.is_zero() && r.prob_degree.is_zero() && r.entropy_degree == 0.0);
        assert!(!r.kappa);
    }
}

#[test]
fn contributive_responsibility_over_time() {
    let f = uniform();
    for t in 1..=8 {
        let psi = f.outcome(&format!("<A1,A2> G<={t} (fine | reward)"));
        let pi = f.plan(&format!("[(c,c); (d,d)]^{t}"));
        let r = degree_ccr(&f.game, f.s("s0"), f.a1(), &pi, &psi).unwrap();
        assert_eq!(r.count_degree, q(1, 1 << t), "t={t}");
        assert_eq!(r.prob_degree, q(1, 1 << t), "t={t}");
        assert_eq!(r.coalitions.len(), 2);
        assert!(r.coalitions.iter().all(|c| c.contributes && c.positive.cardinality == 1));
        let expected = 1.0 / (1.0 + pow(2, t)).log2();
        assert!((r.entropy_degree - expected).abs() < 1e-9, "t={t}");
    }
}

#[test]
fn ill_posed_degree_queries_are_errors() {
    let f = uniform();
    let (s0, a1) = (f.s("s0"), f.a1());
    let never = f.outcome("X (reward & fine)");
    // CAR: avoidable but unsatisfiable.
    assert!(matches!(
        degree(ResponsibilityKind::Car, &f.game, s0, a1, &f.plan("(c,c)"), &never),
        Err(Error::OutcomeUnsatisfiable { length: 1 })
    ));
    // CPR needs a satisfying plan history for the gate, then an unavoidable outcome.
    let always = f.outcome("X true");
    assert!(matches!(
        degree(ResponsibilityKind::Cpr, &f.game, s0, a1, &f.plan("(c,c)"), &always),
        Err(Error::OutcomeUnavoidable { length: 1 })
    ));
    let r = degree(ResponsibilityKind::Ccr, &f.game, s0, a1, &f.plan("(c,c)"), &never).unwrap();
    assert!(r.count_degree.is_zero() && r.note.is_some());
}

#[test]
fn active_responsibility_of_a_guaranteed_choice_is_full() {
    let f = uniform();
    let r = degree_car(&f.game, f.s("s0"), f.a1(), &f.plan("(c,*)"), &f.outcome("X cooperative1")).unwrap();
    assert!(r.kappa);
    assert_eq!(r.responsible.cardinality, r.reference.cardinality);
    assert!(r.count_degree.is_one() && r.prob_degree.is_one());
    assert!((r.entropy_degree - 1.0).abs() < 1e-12);
}
