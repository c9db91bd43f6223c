//! Line-oriented model files.
//!
//! ```text
//! # comment
//! agents A1 A2
//! actions c d
//! props cooperative1 cooperative2
//! define reward = cooperative1 & cooperative2
//! state s0 {}
//! state s1 {cooperative1 cooperative2}
//! trans s0 (d,d) -> s0 : 1
//! trans * (c,c) -> s1 : 1/2, s0 : 1/2
//! profile A1 {c: 3/4, d: 1/4}
//! profile biased A2 {c: 3/4, d: 1/4}
//! ```
//!
//! `*` as the source of a `trans` line stands for every declared state. A
//! `profile` line with two names before the braces belongs to a named
//! alternative profile; agents omitted from a profile act uniformly.

use std::collections::BTreeMap;

use super::GameStructure;
use crate::error::{Error, Position, Result};
use crate::logic::{Definitions, StateFormula};
use crate::num::{parse_rational, Rational};

#[derive(Debug, Clone)]
pub struct ModelFile {
    /// The model under its default profile.
    pub game: GameStructure<Rational>,
    pub profiles: BTreeMap<String, Vec<Vec<Rational>>>,
    pub definitions: Definitions,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self> {
        Parser::default().run(text)
    }

    pub fn profile_names(&self) -> impl Iterator<Item = &str> {
        self.profiles.keys().map(String::as_str)
    }

    /// The model under a named profile, or the default one for `None`.
    pub fn game_with_profile(&self, name: Option<&str>) -> Result<GameStructure<Rational>> {
        match name {
            None | Some("default") => Ok(self.game.clone()),
            Some(name) => {
                let profile = self
                    .profiles
                    .get(name)
                    .ok_or_else(|| Error::unknown("profile", name))?;
                self.game.with_profile(profile.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok<'a> {
    Word(&'a str),
    Punct(&'static str),
}

struct Line<'a> {
    number: usize,
    toks: Vec<(Tok<'a>, usize)>,
    pos: usize,
    text: &'a str,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        position: Position { line, column },
        message: message.into(),
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '/')
}

impl<'a> Line<'a> {
    fn lex(number: usize, text: &'a str) -> Result<Self> {
        let mut toks = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some(&(i, c)) = chars.peek() {
            if c.is_whitespace() {
                chars.next();
            } else if is_word_char(c) {
                let mut end = i;
                while let Some(&(j, c)) = chars.peek() {
                    if !is_word_char(c) {
                        break;
                    }
                    end = j + c.len_utf8();
                    chars.next();
                }
                toks.push((Tok::Word(&text[i..end]), i));
            } else {
                chars.next();
                let p = match c {
                    '(' => "(",
                    ')' => ")",
                    '{' => "{",
                    '}' => "}",
                    ',' => ",",
                    ':' => ":",
                    '=' => "=",
                    '*' => "*",
                    '-' if chars.peek().map(|&(_, c)| c) == Some('>') => {
                        chars.next();
                        "->"
                    }
                    _ => return Err(syntax(number, i + 1, format!("unexpected character `{c}`"))),
                };
                toks.push((Tok::Punct(p), i));
            }
        }
        Ok(Line {
            number,
            toks,
            pos: 0,
            text,
        })
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.text.len(), |t| t.1) + 1
    }

    fn err(&self, message: impl Into<String>) -> Error {
        syntax(self.number, self.column(), message)
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn word(&mut self, what: &str) -> Result<&'a str> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = *w;
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }

    fn name(&mut self, what: &str) -> Result<&'a str> {
        let col = self.column();
        let w = self.word(what)?;
        if !w.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') || w.contains('/') {
            return Err(syntax(self.number, col, format!("`{w}` is not a valid {what}")));
        }
        Ok(w)
    }

    fn punct(&mut self, p: &'static str) -> Result<()> {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{p}`")))
        }
    }

    fn eat(&mut self, p: &'static str) -> bool {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let col = self.column();
        let w = self.word("probability")?;
        parse_rational(w).ok_or_else(|| syntax(self.number, col, format!("`{w}` is not a rational")))
    }

    fn names_to_end(&mut self, what: &str) -> Result<Vec<&'a str>> {
        let mut out = Vec::new();
        while self.peek().is_some() {
            out.push(self.name(what)?);
        }
        Ok(out)
    }

    fn end(&self) -> Result<()> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }
}

type Transition<'a> = (usize, &'a str, Vec<&'a str>, Vec<(&'a str, Rational)>);

#[derive(Default)]
struct Parser<'a> {
    agents: Option<Vec<&'a str>>,
    actions: Option<Vec<&'a str>>,
    props: Vec<&'a str>,
    states: Vec<(&'a str, Vec<&'a str>)>,
    transitions: Vec<Transition<'a>>,
    profiles: Vec<(Option<&'a str>, &'a str, Vec<(&'a str, Rational)>, usize)>,
    definitions: Vec<(&'a str, &'a str, Position)>,
}

impl<'a> Parser<'a> {
    fn run(mut self, text: &'a str) -> Result<ModelFile> {
        for (idx, raw) in text.lines().enumerate() {
            let number = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            if content.trim().is_empty() {
                continue;
            }
            // A definition body is formula syntax; only its head is lexed here.
            let head = match content.find('=') {
                Some(eq) if content.trim_start().starts_with("define") => &content[..=eq],
                _ => content,
            };
            let mut line = Line::lex(number, head)?;
            let keyword = line.word("keyword")?;
            match keyword {
                "agents" => self.agents = Some(line.names_to_end("agent")?),
                "actions" => self.actions = Some(line.names_to_end("action")?),
                "props" => self.props.extend(line.names_to_end("proposition")?),
                "state" => {
                    let name = line.name("state")?;
                    line.punct("{")?;
                    let mut label = Vec::new();
                    while !line.eat("}") {
                        label.push(line.name("proposition")?);
                        line.eat(",");
                    }
                    line.end()?;
                    self.states.push((name, label));
                }
                "trans" => {
                    let source = if line.eat("*") { "*" } else { line.name("state")? };
                    line.punct("(")?;
                    let mut joint = vec![line.name("action")?];
                    while line.eat(",") {
                        joint.push(line.name("action")?);
                    }
                    line.punct(")")?;
                    line.punct("->")?;
                    let mut targets = Vec::new();
                    loop {
                        let target = line.name("state")?;
                        line.punct(":")?;
                        targets.push((target, line.rational()?));
                        if !line.eat(",") {
                            break;
                        }
                    }
                    line.end()?;
                    self.transitions.push((number, source, joint, targets));
                }
                "profile" => {
                    let first = line.name("agent")?;
                    let (name, agent) = match line.peek() {
                        Some(Tok::Word(_)) => (Some(first), line.name("agent")?),
                        _ => (None, first),
                    };
                    line.punct("{")?;
                    let mut dist = Vec::new();
                    while !line.eat("}") {
                        let action = line.name("action")?;
                        line.punct(":")?;
                        dist.push((action, line.rational()?));
                        line.eat(",");
                    }
                    line.end()?;
                    self.profiles.push((name, agent, dist, number));
                }
                "define" => {
                    let name = line.name("definition name")?;
                    let col = line.column();
                    line.punct("=")?;
                    let body = &content[col..];
                    let position = Position {
                        line: number,
                        column: col + 1,
                    };
                    self.definitions.push((name, body, position));
                }
                other => {
                    return Err(syntax(number, 1, format!("unknown declaration `{other}`")));
                }
            }
        }
        self.finish()
    }

    fn finish(self) -> Result<ModelFile> {
        let agents = self
            .agents
            .ok_or_else(|| Error::InvalidModel("missing `agents` declaration".into()))?;
        let actions = self
            .actions
            .ok_or_else(|| Error::InvalidModel("missing `actions` declaration".into()))?;
        let mut builder = GameStructure::<Rational>::builder(&agents, &actions).propositions(&self.props);
        for (name, label) in &self.states {
            builder = builder.state(name, label);
        }
        for (number, source, joint, targets) in &self.transitions {
            let sources: Vec<&str> = if *source == "*" {
                self.states.iter().map(|(s, _)| *s).collect()
            } else {
                vec![*source]
            };
            if !sources.iter().all(|s| self.states.iter().any(|(n, _)| n == s)) {
                return Err(syntax(*number, 7, format!("unknown state `{source}`")));
            }
            for s in sources {
                builder = builder.transition(s, joint, targets.iter().map(|(t, p)| (*t, p.clone())).collect());
            }
        }
        for (name, agent, dist, _) in &self.profiles {
            if name.is_none() {
                builder = builder.profile(agent, dist.iter().map(|(a, p)| (*a, p.clone())).collect());
            }
        }
        let game = builder.build()?;

        let mut profiles: BTreeMap<String, Vec<Vec<Rational>>> = BTreeMap::new();
        for (name, agent, dist, number) in &self.profiles {
            let Some(name) = name else { continue };
            let base = profiles
                .entry(name.to_string())
                .or_insert_with(|| game.uniform_profile());
            let a = game
                .agent_id(agent)
                .ok_or_else(|| syntax(*number, 1, format!("unknown agent `{agent}`")))?;
            let row = &mut base[a.0];
            row.iter_mut().for_each(|p| *p = Rational::from_integer(0.into()));
            for (action, p) in dist {
                let id = game
                    .action_id(action)
                    .ok_or_else(|| syntax(*number, 1, format!("unknown action `{action}`")))?;
                row[id.0] = p.clone();
            }
        }
        for (name, profile) in &profiles {
            game.with_profile(profile.clone())
                .map_err(|e| Error::InvalidModel(format!("profile `{name}`: {e}")))?;
        }

        let mut definitions = Definitions::new();
        for (name, body, position) in &self.definitions {
            if game.prop_id(name).is_some() || definitions.get(name).is_some() {
                return Err(syntax(position.line, 8, format!("`{name}` is already defined")));
            }
            let formula: StateFormula = crate::logic::parse_state_formula_with(&game, &definitions, body)
                .map_err(|e| shift_position(e, *position))?;
            if !formula.is_propositional() {
                return Err(syntax(position.line, position.column, "definitions must be propositional"));
            }
            definitions.insert(name.to_string(), formula);
        }

        Ok(ModelFile {
            game,
            profiles,
            definitions,
        })
    }
}

fn shift_position(err: Error, origin: Position) -> Error {
    match err {
        Error::Syntax { position, message } => Error::Syntax {
            position: Position {
                line: origin.line + position.line - 1,
                column: if position.line == 1 {
                    origin.column + position.column - 1
                } else {
                    position.column
                },
            },
            message,
        },
        other => other,
    }
}
