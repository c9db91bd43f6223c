//! Formula and plan syntax.
//!
//! ```text
//! or     := and ('|' and)*
//! and    := until ('&' until)*
//! until  := unary ('U' '<=' k unary)?
//! unary  := '!' unary | 'X' unary | 'F' '<=' k unary | 'G' '<=' k unary
//!         | '<' agents '>' body | 'P' cmp p '<' agents '>' body | atom
//! body   := '[' or ']' | unary
//! atom   := 'true' | 'false' | name | '(' or ')' | KIND '(' agent ';' plan ';' or ')'
//! ```
//!
//! Plans are `;`-separated steps. A step is `(a,b)` with one action or `*`
//! per agent, or `(A1:d, *)` naming constrained agents. `(…)^k` repeats a
//! step, `[s1; s2]^k` cycles a block to exactly `k` steps, and a leading
//! `...` marks a free prefix of arbitrary length.

use super::ast::{Comparison, Definitions, HistoryFormula, ResponsibilityKind, StateFormula};
use crate::error::{Error, Position, Result};
use crate::model::{AgentId, AgentSet, GameStructure, PlanPattern, PlanStep};
use crate::num::{parse_rational, Probability, Rational};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(&'static str),
    End,
}

const SYMBOLS: &[(&str, &str)] = &[
    ("...", "..."),
    ("<=", "<="),
    (">=", ">="),
    ("&&", "&"),
    ("||", "|"),
    ("≤", "<="),
    ("≥", ">="),
    ("¬", "!"),
    ("∧", "&"),
    ("∨", "|"),
    ("!", "!"),
    ("&", "&"),
    ("|", "|"),
    ("(", "("),
    (")", ")"),
    ("[", "["),
    ("]", "]"),
    ("<", "<"),
    (">", ">"),
    (",", ","),
    (";", ";"),
    (":", ":"),
    ("*", "*"),
    ("^", "^"),
    ("/", "/"),
];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let mut out = Vec::new();
    let mut i = 0;
    let bytes = text.as_bytes();
    'outer: while i < text.len() {
        let c = text[i..].chars().next().unwrap();
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < text.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < text.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < text.len() && bytes[i] == b'.' && bytes[i + 1].is_ascii_digit() {
                i += 1;
                while i < text.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((Tok::Number(text[start..i].to_string()), start));
            continue;
        }
        for (pat, sym) in SYMBOLS {
            if text[i..].starts_with(pat) {
                out.push((Tok::Sym(sym), i));
                i += pat.len();
                continue 'outer;
            }
        }
        return Err(syntax_at(text, i, format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

fn position_of(text: &str, offset: usize) -> Position {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Position { line, column }
}

fn syntax_at(text: &str, offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position: position_of(text, offset),
        message: message.into(),
    }
}

/// Untyped syntax tree; typing into state or history formulae happens after parsing.
#[derive(Debug, Clone)]
struct Expr {
    kind: ExprKind,
    offset: usize,
}

#[derive(Debug, Clone)]
enum ExprKind {
    True,
    False,
    Name(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Next(Box<Expr>),
    Until(Box<Expr>, usize, Box<Expr>),
    Finally(usize, Box<Expr>),
    Globally(usize, Box<Expr>),
    Coalition(AgentSet, Box<Expr>),
    Prob(Comparison, Rational, AgentSet, Box<Expr>),
    Resp(ResponsibilityKind, AgentId, PlanPattern, Box<Expr>),
}

struct Parser<'a, P> {
    game: &'a GameStructure<P>,
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a, P: Probability> Parser<'a, P> {
    fn new(game: &'a GameStructure<P>, text: &'a str) -> Result<Self> {
        Ok(Parser {
            game,
            text,
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax_at(self.text, self.offset(), message)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`, found {}", describe(self.peek()))))
        }
    }

    fn expect_end(&self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            t => Err(self.err(format!("unexpected {} after the end of the input", describe(t)))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.err(format!("expected {what}, found {}", describe(&t)))),
        }
    }

    fn number(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Number(s) if !s.contains('.') => {
                let value = s.parse().map_err(|_| self.err("bound is too large"))?;
                self.bump();
                Ok(value)
            }
            t => Err(self.err(format!("expected a non-negative integer, found {}", describe(&t)))),
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == name)
    }

    fn next_is_sym(&self, k: usize, s: &str) -> bool {
        matches!(self.peek_at(k), Tok::Sym(t) if *t == s)
    }

    fn or(&mut self) -> Result<Expr> {
        let mut lhs = self.and()?;
        while self.is_sym("|") {
            let offset = self.offset();
            self.bump();
            let rhs = self.and()?;
            lhs = Expr {
                kind: ExprKind::Or(Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut lhs = self.until()?;
        while self.is_sym("&") {
            let offset = self.offset();
            self.bump();
            let rhs = self.until()?;
            lhs = Expr {
                kind: ExprKind::And(Box::new(lhs), Box::new(rhs)),
                offset,
            };
        }
        Ok(lhs)
    }

    fn is_until(&self) -> bool {
        self.is_ident("U") && self.next_is_sym(1, "<=")
    }

    fn until(&mut self) -> Result<Expr> {
        let lhs = self.unary()?;
        if !self.is_until() {
            return Ok(lhs);
        }
        let offset = self.offset();
        self.bump();
        self.bump();
        let k = self.number()?;
        let rhs = self.unary()?;
        if self.is_until() {
            return Err(self.err("`U` is not associative; add parentheses"));
        }
        Ok(Expr {
            kind: ExprKind::Until(Box::new(lhs), k, Box::new(rhs)),
            offset,
        })
    }

    fn unary(&mut self) -> Result<Expr> {
        let offset = self.offset();
        let kind = if self.eat("!") {
            ExprKind::Not(Box::new(self.unary()?))
        } else if self.is_ident("X") {
            self.bump();
            ExprKind::Next(Box::new(self.unary()?))
        } else if (self.is_ident("F") || self.is_ident("G")) && self.next_is_sym(1, "<=") {
            let finally = self.is_ident("F");
            self.bump();
            self.bump();
            let k = self.number()?;
            let body = Box::new(self.unary()?);
            if finally {
                ExprKind::Finally(k, body)
            } else {
                ExprKind::Globally(k, body)
            }
        } else if self.is_sym("<") {
            let coalition = self.coalition()?;
            ExprKind::Coalition(coalition, Box::new(self.body()?))
        } else if self.is_ident("P") && matches!(self.peek_at(1), Tok::Sym("<=" | "<" | ">=" | ">")) {
            self.bump();
            let comparison = match self.bump() {
                Tok::Sym("<=") => Comparison::Le,
                Tok::Sym("<") => Comparison::Lt,
                Tok::Sym(">=") => Comparison::Ge,
                _ => Comparison::Gt,
            };
            let bound = self.probability()?;
            let coalition = self.coalition()?;
            ExprKind::Prob(comparison, bound, coalition, Box::new(self.body()?))
        } else {
            return self.atom();
        };
        Ok(Expr { kind, offset })
    }

    fn probability(&mut self) -> Result<Rational> {
        let offset = self.offset();
        let mut text = match self.bump() {
            Tok::Number(n) => n,
            t => return Err(syntax_at(self.text, offset, format!("expected a probability, found {}", describe(&t)))),
        };
        if self.eat("/") {
            match self.bump() {
                Tok::Number(d) => {
                    text.push('/');
                    text.push_str(&d);
                }
                t => return Err(self.err(format!("expected a denominator, found {}", describe(&t)))),
            }
        }
        let p = parse_rational(&text).ok_or_else(|| syntax_at(self.text, offset, format!("`{text}` is not a rational")))?;
        if p < Rational::from_integer(0.into()) || p > Rational::from_integer(1.into()) {
            return Err(syntax_at(self.text, offset, format!("probability bound {text} is outside [0,1]")));
        }
        Ok(p)
    }

    fn coalition(&mut self) -> Result<AgentSet> {
        self.expect("<")?;
        let mut set = AgentSet::empty();
        if self.eat(">") {
            return Ok(set);
        }
        loop {
            let offset = self.offset();
            let name = self.ident("an agent")?;
            let agent = self.game.agent_id(&name).ok_or_else(|| unknown_at(self.text, offset, "agent", &name))?;
            set = set.with(agent);
            if self.eat(">") {
                return Ok(set);
            }
            self.expect(",")?;
        }
    }

    fn body(&mut self) -> Result<Expr> {
        if self.eat("[") {
            let inner = self.or()?;
            self.expect("]")?;
            Ok(inner)
        } else {
            self.unary()
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let offset = self.offset();
        let kind = match self.peek().clone() {
            Tok::Sym("(") => {
                self.bump();
                let inner = self.or()?;
                self.expect(")")?;
                return Ok(inner);
            }
            Tok::Ident(name) if name == "true" => {
                self.bump();
                ExprKind::True
            }
            Tok::Ident(name) if name == "false" => {
                self.bump();
                ExprKind::False
            }
            Tok::Ident(name) if matches!(name.as_str(), "CAR" | "CPR" | "CCR") && self.next_is_sym(1, "(") => {
                let kind: ResponsibilityKind = name.parse()?;
                self.bump();
                self.bump();
                let agent_offset = self.offset();
                let agent_name = self.ident("an agent")?;
                let agent = self
                    .game
                    .agent_id(&agent_name)
                    .ok_or_else(|| unknown_at(self.text, agent_offset, "agent", &agent_name))?;
                self.expect(";")?;
                let plan = self.plan(true)?;
                let outcome = self.or()?;
                self.expect(")")?;
                ExprKind::Resp(kind, agent, plan, Box::new(outcome))
            }
            Tok::Ident(name) => {
                if name == "X" {
                    return Err(self.err("`X` needs an operand"));
                }
                self.bump();
                ExprKind::Name(name)
            }
            t => return Err(self.err(format!("expected a formula, found {}", describe(&t)))),
        };
        Ok(Expr { kind, offset })
    }

    /// Parses a plan. Inside a responsibility operator the plan is followed
    /// by `; outcome`, so a step is only committed when a `;` follows it.
    fn plan(&mut self, embedded: bool) -> Result<PlanPattern> {
        let start = self.offset();
        let wildcard = self.eat("...");
        if wildcard {
            self.eat(";");
        }
        let mut steps = Vec::new();
        loop {
            let saved = self.pos;
            match self.plan_item() {
                Ok(item) => {
                    if !embedded {
                        steps.extend(item);
                        if self.eat(";") && !matches!(self.peek(), Tok::End) {
                            continue;
                        }
                        break;
                    }
                    if self.eat(";") {
                        steps.extend(item);
                        continue;
                    }
                    self.pos = saved;
                    break;
                }
                Err(e) => {
                    if steps.is_empty() {
                        return Err(e);
                    }
                    self.pos = saved;
                    break;
                }
            }
        }
        PlanPattern::new(self.game.agent_count(), steps, wildcard).map_err(|e| syntax_at(self.text, start, e.to_string()))
    }

    fn plan_item(&mut self) -> Result<Vec<PlanStep>> {
        if self.eat("[") {
            let offset = self.offset();
            let mut block = self.plan_item()?;
            while self.eat(";") {
                if self.is_sym("]") {
                    break;
                }
                block.extend(self.plan_item()?);
            }
            self.expect("]")?;
            self.expect("^")?;
            let k = self.number()?;
            if k == 0 {
                return Err(syntax_at(self.text, offset, "a repeated block needs at least one step"));
            }
            return Ok(block.iter().cycle().take(k).cloned().collect());
        }
        let step = self.plan_step()?;
        if self.eat("^") {
            let offset = self.offset();
            let k = self.number()?;
            if k == 0 {
                return Err(syntax_at(self.text, offset, "repetition count must be positive"));
            }
            return Ok(vec![step; k]);
        }
        Ok(vec![step])
    }

    fn plan_step(&mut self) -> Result<PlanStep> {
        let open = self.offset();
        self.expect("(")?;
        let n = self.game.agent_count();
        let mut positional: Vec<(Option<String>, usize)> = Vec::new();
        let mut named: Vec<(String, String, usize)> = Vec::new();
        loop {
            let offset = self.offset();
            if self.eat("*") {
                positional.push((None, offset));
            } else {
                let first = self.ident("an action, `*` or `Agent:action`")?;
                if self.eat(":") {
                    let action = self.ident("an action")?;
                    named.push((first, action, offset));
                } else {
                    positional.push((Some(first), offset));
                }
            }
            if self.eat(")") {
                break;
            }
            self.expect(",")?;
        }
        let action = |name: &str, offset: usize| {
            self.game
                .action_id(name)
                .ok_or_else(|| unknown_at(self.text, offset, "action", name))
        };
        if named.is_empty() {
            if positional.len() != n {
                return Err(syntax_at(
                    self.text,
                    open,
                    format!("step has {} entries but the model has {n} agents", positional.len()),
                ));
            }
            return positional
                .iter()
                .map(|(a, offset)| a.as_deref().map(|a| action(a, *offset)).transpose())
                .collect();
        }
        if let Some((_, offset)) = positional.iter().find(|(a, _)| a.is_some()) {
            return Err(syntax_at(
                self.text,
                *offset,
                "positional actions cannot be mixed with `Agent:action` entries",
            ));
        }
        let mut step: PlanStep = vec![None; n];
        for (agent, act, offset) in &named {
            let id = self
                .game
                .agent_id(agent)
                .ok_or_else(|| unknown_at(self.text, *offset, "agent", agent))?;
            if step[id.0].is_some() {
                return Err(syntax_at(self.text, *offset, format!("agent {agent} is constrained twice")));
            }
            step[id.0] = Some(action(act, *offset)?);
        }
        Ok(step)
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Number(s) => format!("`{s}`"),
        Tok::Sym(s) => format!("`{s}`"),
        Tok::End => "end of input".to_string(),
    }
}

fn unknown_at(text: &str, offset: usize, kind: &'static str, name: &str) -> Error {
    syntax_at(text, offset, format!("unknown {kind} `{name}`"))
}

struct Typer<'a, P> {
    game: &'a GameStructure<P>,
    definitions: &'a Definitions,
    text: &'a str,
}

impl<P: Probability> Typer<'_, P> {
    fn err(&self, e: &Expr, message: &str) -> Error {
        syntax_at(self.text, e.offset, message)
    }

    fn state(&self, e: &Expr) -> Result<StateFormula> {
        Ok(match &e.kind {
            ExprKind::True => StateFormula::True,
            ExprKind::False => StateFormula::falsum(),
            ExprKind::Name(name) => {
                if let Some(p) = self.game.prop_id(name) {
                    StateFormula::Atom(p)
                } else if let Some(f) = self.definitions.get(name) {
                    f.clone()
                } else {
                    return Err(unknown_at(self.text, e.offset, "proposition", name));
                }
            }
            ExprKind::Not(a) => self.state(a)?.not(),
            ExprKind::And(a, b) => self.state(a)?.and(self.state(b)?),
            ExprKind::Or(a, b) => self.state(a)?.or(self.state(b)?),
            ExprKind::Coalition(set, body) => StateFormula::Coalition(*set, Box::new(self.history(body)?)),
            ExprKind::Prob(comparison, bound, coalition, body) => StateFormula::ProbBound {
                comparison: *comparison,
                bound: bound.clone(),
                coalition: *coalition,
                path: Box::new(self.history(body)?),
            },
            ExprKind::Resp(kind, agent, plan, outcome) => StateFormula::Responsibility {
                kind: *kind,
                agent: *agent,
                plan: plan.clone(),
                outcome: Box::new(self.outcome(outcome)?),
            },
            ExprKind::Next(_) | ExprKind::Until(..) | ExprKind::Finally(..) | ExprKind::Globally(..) => {
                return Err(self.err(e, "temporal operator used where a state formula is expected; wrap it in <A>[...]"))
            }
        })
    }

    fn history(&self, e: &Expr) -> Result<HistoryFormula> {
        Ok(match &e.kind {
            ExprKind::Not(a) => self.history(a)?.not(),
            ExprKind::And(a, b) => self.history(a)?.and(self.history(b)?),
            ExprKind::Or(a, b) => self.history(a)?.or(self.history(b)?),
            ExprKind::Next(a) => HistoryFormula::next(self.state(a)?),
            ExprKind::Until(a, k, b) => HistoryFormula::until(self.state(a)?, *k, self.state(b)?),
            ExprKind::Finally(k, a) => HistoryFormula::finally(*k, self.state(a)?),
            ExprKind::Globally(k, a) => HistoryFormula::globally(*k, self.state(a)?),
            _ => return Err(self.err(e, "expected a path formula (X, U, F or G)")),
        })
    }

    /// Outcomes are path formulae; a leading coalition quantifier is dropped,
    /// since the plan already fixes behavior.
    fn outcome(&self, e: &Expr) -> Result<HistoryFormula> {
        match &e.kind {
            ExprKind::Coalition(_, body) => self.history(body),
            _ => self.history(e),
        }
    }
}

fn parse_expr<P: Probability>(game: &GameStructure<P>, text: &str) -> Result<Expr> {
    let mut p = Parser::new(game, text)?;
    let e = p.or()?;
    p.expect_end()?;
    Ok(e)
}

pub fn parse_state_formula<P: Probability>(game: &GameStructure<P>, text: &str) -> Result<StateFormula> {
    parse_state_formula_with(game, &Definitions::new(), text)
}

pub fn parse_state_formula_with<P: Probability>(
    game: &GameStructure<P>,
    definitions: &Definitions,
    text: &str,
) -> Result<StateFormula> {
    let e = parse_expr(game, text)?;
    Typer { game, definitions, text }.state(&e)
}

pub fn parse_history_formula<P: Probability>(game: &GameStructure<P>, text: &str) -> Result<HistoryFormula> {
    parse_history_formula_with(game, &Definitions::new(), text)
}

pub fn parse_history_formula_with<P: Probability>(
    game: &GameStructure<P>,
    definitions: &Definitions,
    text: &str,
) -> Result<HistoryFormula> {
    let e = parse_expr(game, text)?;
    Typer { game, definitions, text }.history(&e)
}

/// Parses the outcome of a responsibility query: a path formula, optionally
/// wrapped in a coalition quantifier that is dropped.
pub fn parse_outcome_with<P: Probability>(
    game: &GameStructure<P>,
    definitions: &Definitions,
    text: &str,
) -> Result<HistoryFormula> {
    let e = parse_expr(game, text)?;
    Typer { game, definitions, text }.outcome(&e)
}

pub fn parse_plan<P: Probability>(game: &GameStructure<P>, text: &str) -> Result<PlanPattern> {
    let mut p = Parser::new(game, text)?;
    let plan = p.plan(false)?;
    p.expect_end()?;
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::display_state;
    use crate::testing::{cpd, cpd_file};

    #[test]
    fn coalition_next_reward() {
        let m = cpd_file();
        let f = parse_state_formula_with(&m.game, &m.definitions, "<A1,A2> [ X reward ]").unwrap();
        let reward = m.definitions.get("reward").unwrap().clone();
        assert_eq!(
            f,
            StateFormula::Coalition(m.game.all_agents(), Box::new(HistoryFormula::next(reward)))
        );
    }

    #[test]
    fn finally_is_sugar_for_until() {
        let m = cpd_file();
        let f = parse_history_formula_with(&m.game, &m.definitions, "F<=2 fine").unwrap();
        let fine = m.definitions.get("fine").unwrap().clone();
        assert_eq!(f, HistoryFormula::until(StateFormula::True, 2, fine));
    }

    #[test]
    fn globally_is_dual_of_finally() {
        let g = cpd();
        let a = parse_history_formula(&g, "G<=3 cooperative1").unwrap();
        let b = parse_history_formula(&g, "!F<=3 !cooperative1").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negated_conjunction_round_trips() {
        let g = cpd();
        let f = parse_state_formula(&g, "!(cooperative1 & cooperative2)").unwrap();
        let printed = display_state(&g, &f);
        assert_eq!(printed, "!(cooperative1 & cooperative2)");
        assert_eq!(parse_state_formula(&g, &printed).unwrap(), f);
    }

    #[test]
    fn precedence_and_over_or() {
        let g = cpd();
        let f = parse_state_formula(&g, "cooperative1 | cooperative2 & false").unwrap();
        let c1 = StateFormula::Atom(g.prop_id("cooperative1").unwrap());
        let c2 = StateFormula::Atom(g.prop_id("cooperative2").unwrap());
        assert_eq!(f, c1.or(c2.and(StateFormula::falsum())));
    }

    #[test]
    fn until_is_not_associative() {
        let g = cpd();
        assert!(parse_history_formula(&g, "cooperative1 U<=1 cooperative2 U<=1 true").is_err());
        assert!(parse_history_formula(&g, "cooperative1 U<=1 (cooperative2)").is_ok());
    }

    #[test]
    fn probability_bounds() {
        let g = cpd();
        let f = parse_state_formula(&g, "P>=1/4 <>[X cooperative1]").unwrap();
        match f {
            StateFormula::ProbBound {
                comparison, bound, coalition, ..
            } => {
                assert_eq!(comparison, Comparison::Ge);
                assert_eq!(bound, Rational::new(1.into(), 4.into()));
                assert!(coalition.is_empty());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_state_formula(&g, "P>=0.5 <A1>[X cooperative1]").is_ok());
        assert!(parse_state_formula(&g, "P>=3/2 <A1>[X cooperative1]").is_err());
    }

    #[test]
    fn responsibility_operator_with_multi_step_plan() {
        let m = cpd_file();
        let f = parse_state_formula_with(&m.game, &m.definitions, "CCR(A1; (c,d); (d,d); <A1,A2> F<=2 fine)").unwrap();
        match f {
            StateFormula::Responsibility { kind, plan, outcome, .. } => {
                assert_eq!(kind, ResponsibilityKind::Ccr);
                assert_eq!(plan.len(), 2);
                assert_eq!(outcome.horizon(), 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn plan_forms() {
        let g = cpd();
        let p = parse_plan(&g, "...; (d,c)").unwrap();
        assert!(p.wildcard_prefix());
        assert_eq!(p.display(&g), "...; (d,c)");
        let p = parse_plan(&g, "(A1:d, *)^3").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.coalition(), AgentSet::singleton(AgentId(0)));
        let p = parse_plan(&g, "[(c,c); (d,d)]^5").unwrap();
        assert_eq!(p.display(&g), "(c,c); (d,d); (c,c); (d,d); (c,c)");
        assert!(parse_plan(&g, "(c)").is_err());
        assert!(parse_plan(&g, "(c, A2:d)").is_err());
        assert!(parse_plan(&g, "").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let g = cpd();
        match parse_state_formula(&g, "cooperative1 &\n  nope").unwrap_err() {
            Error::Syntax { position, message } => {
                assert_eq!(position, Position { line: 2, column: 3 });
                assert!(message.contains("nope"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_state_formula(&g, "<A1,B>[X true]").unwrap_err() {
            Error::Syntax { position, .. } => assert_eq!(position.column, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_state_formula(&g, "X cooperative1").is_err());
        assert!(parse_history_formula(&g, "cooperative1").is_err());
    }
}
