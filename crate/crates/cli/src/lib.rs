//! The `respcheck` front end: argument types, query execution and report
//! rendering. `main.rs` only parses arguments and maps the outcome to an exit
//! status.

pub mod args;
pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use rayon::prelude::*;
use respcheck_core::automata::{asymptotic_entropy, build_product, graph_spectral_radius, LabeledMultigraph, MonitorSpec};
use respcheck_core::logic::{
    eval_state, parse_outcome_with, parse_plan, parse_state_formula_with, ResponsibilityKind, StateFormula,
};
use respcheck_core::measures::degree;
use respcheck_core::model::text::ModelFile;
use respcheck_core::model::{AgentSet, StateId};
use respcheck_core::responsibility::{ccr_witness, check, query_length};
use respcheck_core::ExactGame;
use thiserror::Error;

pub use args::{Cli, Command, Format, Kind, Measure, TRange};
pub use report::{DegreeRow, EntropyRow, Report, VerdictRow, DEGREE_COLUMNS};

/// The token replaced by the sweep parameter in formulae and plans.
pub const T_TOKEN: &str = "@t";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },

    #[error("{path}: {source}")]
    Model { path: PathBuf, source: respcheck_core::Error },

    #[error("--{flag}: {source}")]
    Input { flag: &'static str, source: respcheck_core::Error },

    #[error("{0}")]
    Core(#[from] respcheck_core::Error),

    #[error("t = {t}: histories of length {length} span {histories} joint-action sequences, above the cap of {cap} (see --max-histories)")]
    TooManyHistories { t: usize, length: usize, histories: String, cap: u128 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A check evaluated to false.
    False,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Success => ExitCode::SUCCESS,
            Status::False => ExitCode::from(1),
        }
    }
}

/// Exit status for usage, input and model errors.
pub const ERROR_EXIT: u8 = 2;

/// A loaded model with the selected profile and initial state.
pub struct Loaded {
    pub file: ModelFile,
    pub game: ExactGame,
    pub start: StateId,
}

pub fn load(model: &args::ModelArgs) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(&model.model).map_err(|source| CliError::Read {
        path: model.model.clone(),
        source,
    })?;
    let file = ModelFile::parse(&text).map_err(|source| CliError::Model {
        path: model.model.clone(),
        source,
    })?;
    let game = file.game_with_profile(model.profile.as_deref())?;
    let start = match &model.state {
        Some(name) => game.state(name)?,
        None => StateId(0),
    };
    Ok(Loaded { file, game, start })
}

/// `|Act_joint|^length`, or `None` when it does not fit in 128 bits.
fn joint_sequences(game: &ExactGame, length: usize) -> Option<u128> {
    (game.joint_count() as u128).checked_pow(u32::try_from(length).ok()?)
}

fn guard(game: &ExactGame, t: usize, length: usize, cap: u128) -> Result<(), CliError> {
    match joint_sequences(game, length) {
        Some(n) if n <= cap => Ok(()),
        n => Err(CliError::TooManyHistories {
            t,
            length,
            histories: n.map_or_else(|| format!("{}^{length}", game.joint_count()), |n| n.to_string()),
            cap,
        }),
    }
}

fn coalition_name(game: &ExactGame, set: AgentSet) -> String {
    let names: Vec<&str> = set.iter().map(|a| game.agent_name(a)).collect();
    format!("{{{}}}", names.join(","))
}

struct Query<'a> {
    loaded: &'a Loaded,
    args: &'a args::QueryArgs,
}

struct Parsed {
    agent: respcheck_core::model::AgentId,
    plan: respcheck_core::model::PlanPattern,
    outcome: respcheck_core::logic::HistoryFormula,
    length: usize,
}

impl Query<'_> {
    /// Parses the query with `@t` replaced by `t`, when given.
    fn parse(&self, t: Option<usize>) -> Result<Parsed, CliError> {
        let subst = |s: &str| match t {
            Some(t) => s.replace(T_TOKEN, &t.to_string()),
            None => s.to_string(),
        };
        let game = &self.loaded.game;
        let agent = game.agent(&self.args.agent)?;
        let plan = parse_plan(game, &subst(&self.args.plan)).map_err(|source| CliError::Input { flag: "plan", source })?;
        let outcome = parse_outcome_with(game, &self.loaded.file.definitions, &subst(&self.args.formula))
            .map_err(|source| CliError::Input { flag: "formula", source })?;
        let length = query_length(&plan, &outcome);
        guard(game, t.unwrap_or(length), length, self.args.model.max_histories)?;
        Ok(Parsed {
            agent,
            plan,
            outcome,
            length,
        })
    }

    fn verdict(&self, kind: ResponsibilityKind) -> Result<VerdictRow, CliError> {
        let q = self.parse(None)?;
        let (game, s) = (&self.loaded.game, self.loaded.start);
        if kind == ResponsibilityKind::Ccr {
            let witness = ccr_witness(game, s, q.agent, &q.plan, &q.outcome)?;
            return Ok(VerdictRow {
                verdict: witness.is_some(),
                witness: witness.map(|w| coalition_name(game, w)),
            });
        }
        Ok(VerdictRow {
            verdict: check(game, s, kind, q.agent, &q.plan, &q.outcome)?,
            witness: None,
        })
    }

    fn degree(&self, kind: ResponsibilityKind, t: Option<usize>) -> Result<DegreeRow, CliError> {
        let q = self.parse(t)?;
        let report = degree(kind, &self.loaded.game, self.loaded.start, q.agent, &q.plan, &q.outcome)?;
        Ok(DegreeRow::new(t.unwrap_or(q.length), &report))
    }
}

/// Runs the rows of a sweep in parallel; rows come back ordered by `t`, and
/// the failure at the smallest `t` is reported.
pub fn sweep(loaded: &Loaded, query: &args::QueryArgs, kind: ResponsibilityKind, range: TRange) -> Result<Vec<DegreeRow>, CliError> {
    let q = Query { loaded, args: query };
    let rows: Vec<Result<DegreeRow, CliError>> = range
        .values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|t| q.degree(kind, Some(t)))
        .collect();
    rows.into_iter().collect()
}

fn entropy(loaded: &Loaded, args: &args::EntropyArgs) -> Result<EntropyRow, CliError> {
    let game = &loaded.game;
    let predicate = |text: &str| {
        parse_state_formula_with(game, &loaded.file.definitions, text).map_err(|source| CliError::Input { flag: "formula", source })
    };
    let spec = if let Some(path) = &args.dfa {
        let text = read(path)?;
        MonitorSpec::ExplicitDfa(LabeledMultigraph::parse(&text).map_err(|source| CliError::Model {
            path: path.clone(),
            source,
        })?)
    } else {
        let target = match &args.formula {
            Some(text) => predicate(text)?,
            None => StateFormula::True,
        };
        match args.window {
            Some(window) => MonitorSpec::BoundedRecurrence { window, target },
            None => MonitorSpec::Invariance(target),
        }
    };
    let product = build_product(game, loaded.start, &spec)?;
    Ok(EntropyRow {
        nodes: product.node_count(),
        edges: product.edges().map(|(_, _, c)| c).sum(),
        spectral_radius: graph_spectral_radius(&product)?,
        entropy: asymptotic_entropy(&product)?,
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

/// Builds the report for a command together with the model arguments that
/// control its output.
pub fn report(command: &Command) -> Result<(Report, &args::ModelArgs), CliError> {
    fn verdict(query: &args::QueryArgs, kind: ResponsibilityKind) -> Result<Report, CliError> {
        let loaded = load(&query.model)?;
        let row = Query { loaded: &loaded, args: query }.verdict(kind)?;
        Ok(Report::Verdict(row))
    }
    match command {
        Command::Check(c) => {
            if let (Some(kind), Some(agent), Some(plan)) = (c.kind, &c.agent, &c.plan) {
                let query = args::QueryArgs {
                    model: c.model.clone(),
                    agent: agent.clone(),
                    plan: plan.clone(),
                    formula: c.formula.clone(),
                };
                return Ok((verdict(&query, kind.into())?, &c.model));
            }
            let loaded = load(&c.model)?;
            let phi = parse_state_formula_with(&loaded.game, &loaded.file.definitions, &c.formula)
                .map_err(|source| CliError::Input { flag: "formula", source })?;
            let row = VerdictRow {
                verdict: eval_state(&loaded.game, loaded.start, &phi)?,
                witness: None,
            };
            Ok((Report::Verdict(row), &c.model))
        }
        Command::Car(q) => Ok((verdict(q, ResponsibilityKind::Car)?, &q.model)),
        Command::Cpr(q) => Ok((verdict(q, ResponsibilityKind::Cpr)?, &q.model)),
        Command::Ccr(q) => Ok((verdict(q, ResponsibilityKind::Ccr)?, &q.model)),
        Command::Degree(d) => {
            let loaded = load(&d.query.model)?;
            let row = Query {
                loaded: &loaded,
                args: &d.query,
            }
            .degree(d.kind.into(), None)?;
            Ok((Report::Degree { row, measure: d.measure }, &d.query.model))
        }
        Command::Sweep(s) => {
            let loaded = load(&s.query.model)?;
            let rows = sweep(&loaded, &s.query, s.kind.into(), s.range)?;
            Ok((Report::Sweep { rows, measure: s.measure }, &s.query.model))
        }
        Command::Entropy(e) => {
            let loaded = load(&e.model)?;
            Ok((Report::Entropy(entropy(&loaded, e)?), &e.model))
        }
    }
}

/// Runs a command, writing the report to `out` and, with `--csv`, to a file.
pub fn run(cli: &Cli, out: &mut impl Write) -> Result<Status, CliError> {
    let (report, model) = report(&cli.command)?;
    out.write_all(report.render(model.format).as_bytes())?;
    out.flush()?;
    if let Some(path) = &model.csv {
        std::fs::write(path, report.csv()).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
    }
    Ok(match report {
        Report::Verdict(VerdictRow { verdict: false, .. }) => Status::False,
        _ => Status::Success,
    })
}
