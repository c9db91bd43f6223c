//! Causal responsibility in multi-agent stochastic systems.
//!
//! The crate implements probabilistic alternating-time temporal logic over
//! finite histories, extended with operators for causal active (CAR),
//! passive (CPR) and contributive (CCR) responsibility, plus quantitative
//! responsibility degrees under counting, probability and entropy measures.
//!
//! Everything probabilistic is generic over [`Probability`]; the exact
//! [`Rational`] instantiation is what model files produce, and `f64`/`f32`
//! give approximate runs via [`GameStructure::map_probabilities`].
//!
//! ```
//! use respcheck_core::logic::{parse_outcome_with, parse_plan};
//! use respcheck_core::model::text::ModelFile;
//! use respcheck_core::responsibility::check_car;
//!
//! let src = "agents A1 A2\nactions c d\nprops c1 c2\n\
//!            state s0 {}\nstate s1 {c1 c2}\nstate s2 {c1}\nstate s3 {c2}\n\
//!            trans * (d,d) -> s0 : 1\ntrans * (c,c) -> s1 : 1\n\
//!            trans * (c,d) -> s2 : 1\ntrans * (d,c) -> s3 : 1\n";
//! let m = ModelFile::parse(src).unwrap();
//! let g = &m.game;
//! let psi = parse_outcome_with(g, &m.definitions, "X !c1").unwrap();
//! let plan = parse_plan(g, "(d,d)").unwrap();
//! let a1 = g.agent("A1").unwrap();
//! assert!(check_car(g, g.state("s0").unwrap(), a1, &plan, &psi).unwrap());
//! ```

pub mod automata;
pub mod error;
pub mod logic;
pub mod measures;
pub mod model;
pub mod num;
pub mod responsibility;
#[cfg(feature = "testing")]
pub mod testing;

pub use error::{Error, Position, Result};
pub use model::GameStructure;
pub use num::{Probability, Rational};

/// Model with exact rational probabilities.
pub type ExactGame = GameStructure<Rational>;
/// Model with double-precision probabilities.
pub type FloatGame = GameStructure<f64>;
pub type ExactLanguage = measures::MeasuredLanguage<Rational>;
pub type FloatLanguage = measures::MeasuredLanguage<f64>;
pub type ExactDegreeReport = measures::DegreeReport<Rational>;
pub type FloatDegreeReport = measures::DegreeReport<f64>;
