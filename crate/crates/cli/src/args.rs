use std::fmt;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use respcheck_core::logic::ResponsibilityKind;

#[derive(Debug, Parser)]
#[command(name = "respcheck", version, about = "Responsibility checking and measurement for concurrent stochastic games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a state formula, or a responsibility check when `--kind` is given.
    Check(CheckArgs),
    /// Causal active responsibility.
    Car(QueryArgs),
    /// Causal passive responsibility.
    Cpr(QueryArgs),
    /// Causal contributive responsibility, with its witness coalition.
    Ccr(QueryArgs),
    /// Count, probability and entropy degrees of responsibility.
    Degree(DegreeArgs),
    /// Asymptotic entropy of the model under a behaviour monitor.
    Entropy(EntropyArgs),
    /// Degrees over a range of values substituted for `@t`.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Model file.
    #[arg(long)]
    pub model: PathBuf,
    /// Initial state; defaults to the first declared state.
    #[arg(long)]
    pub state: Option<String>,
    /// Named action profile from the model file.
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Also write the report as CSV to this path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Refuse queries enumerating more joint-action sequences than this.
    #[arg(long, default_value_t = 10_000_000)]
    pub max_histories: u128,
}

#[derive(Debug, Clone, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub agent: String,
    #[arg(long)]
    pub plan: String,
    /// Outcome path formula; a leading coalition quantifier is ignored.
    #[arg(long)]
    pub formula: String,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// State formula, or the outcome when `--kind` is given.
    #[arg(long)]
    pub formula: String,
    #[arg(long, value_enum, requires_all = ["agent", "plan"])]
    pub kind: Option<Kind>,
    #[arg(long)]
    pub agent: Option<String>,
    #[arg(long)]
    pub plan: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct DegreeArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Measure::All)]
    pub measure: Measure,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub query: QueryArgs,
    #[arg(long, value_enum, default_value_t = Kind::Car)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = Measure::All)]
    pub measure: Measure,
    /// Inclusive range `a..b` of values for `@t`.
    #[arg(long = "t")]
    pub range: TRange,
}

#[derive(Debug, Clone, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Predicate to keep invariant, or to revisit with `--window`.
    #[arg(long)]
    pub formula: Option<String>,
    /// Revisit the predicate at least every `w` steps.
    #[arg(long, conflicts_with = "dfa")]
    pub window: Option<usize>,
    /// Explicit automaton over states, used instead of a monitor.
    #[arg(long, conflicts_with = "formula")]
    pub dfa: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Car,
    Cpr,
    Ccr,
}

impl From<Kind> for ResponsibilityKind {
    fn from(kind: Kind) -> Self {
        match kind {
            Kind::Car => ResponsibilityKind::Car,
            Kind::Cpr => ResponsibilityKind::Cpr,
            Kind::Ccr => ResponsibilityKind::Ccr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Count,
    Prob,
    Entropy,
    All,
}

impl Measure {
    pub fn count(self) -> bool {
        matches!(self, Measure::Count | Measure::All)
    }

    pub fn prob(self) -> bool {
        matches!(self, Measure::Prob | Measure::All)
    }

    pub fn entropy(self) -> bool {
        matches!(self, Measure::Entropy | Measure::All)
    }
}

/// A non-empty inclusive range `a..b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TRange {
    pub first: usize,
    pub last: usize,
}

impl TRange {
    pub fn values(self) -> RangeInclusive<usize> {
        self.first..=self.last
    }
}

impl FromStr for TRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected a range `a..b`, got `{s}`"))?;
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{x}` is not a non-negative integer"))
        };
        let (first, last) = (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?);
        if first > last {
            return Err(format!("range {first}..{last} is empty"));
        }
        Ok(TRange { first, last })
    }
}

impl fmt::Display for TRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}
