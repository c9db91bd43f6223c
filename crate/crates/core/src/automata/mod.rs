//! Asymptotic entropy of specification-constrained behavior.
//!
//! The behavior of a model restricted by a monitor is a multigraph whose edge
//! multiplicities count the enabling symbols, i.e. the (joint action,
//! successor) pairs of positive probability. For a trimmed deterministic
//! automaton the entropy of its language is `log₂ ϱ(M)` for the
//! edge-count matrix `M`.

mod spectral;

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Position, Result};
use crate::logic::{eval_state, StateFormula};
use crate::model::{GameStructure, StateId};
use crate::num::Probability;

pub use spectral::{spectral_radius, tolerance, MAX_ITERATIONS};

/// Nodes with an initial node, accepting flags and edge multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LabeledMultigraph {
    names: Vec<String>,
    initial: Option<usize>,
    accepting: Vec<bool>,
    edges: BTreeMap<(usize, usize), u64>,
}

impl LabeledMultigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: impl Into<String>, accepting: bool) -> usize {
        self.names.push(name.into());
        self.accepting.push(accepting);
        self.names.len() - 1
    }

    pub fn set_initial(&mut self, node: usize) {
        self.initial = Some(node);
    }

    /// Adds `count` parallel edges.
    pub fn add_edges(&mut self, from: usize, to: usize, count: u64) {
        if count > 0 {
            *self.edges.entry((from, to)).or_insert(0) += count;
        }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty() || self.initial.is_none()
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    pub fn is_accepting(&self, node: usize) -> bool {
        self.accepting[node]
    }

    pub fn node_name(&self, node: usize) -> &str {
        &self.names[node]
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edge_count(&self, from: usize, to: usize) -> u64 {
        self.edges.get(&(from, to)).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.edges.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    /// Total multiplicity of the edges leaving `node`.
    pub fn out_degree(&self, node: usize) -> u64 {
        self.edges.range((node, 0)..=(node, usize::MAX)).map(|(_, c)| *c).sum()
    }

    /// The extended adjacency matrix `M(A)`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.node_count();
        let mut m = vec![vec![0; n]; n];
        for (a, b, c) in self.edges() {
            m[a][b] = c;
        }
        m
    }

    /// Restriction to nodes reachable from the initial node and co-reachable
    /// to an accepting node. Empty when the initial node does not survive.
    pub fn trim(&self) -> LabeledMultigraph {
        let Some(init) = self.initial else {
            return LabeledMultigraph::new();
        };
        let n = self.node_count();
        let mut forward = vec![Vec::new(); n];
        let mut backward = vec![Vec::new(); n];
        for (a, b, _) in self.edges() {
            forward[a].push(b);
            backward[b].push(a);
        }
        let reachable = bfs(&forward, std::iter::once(init));
        let coreachable = bfs(&backward, (0..n).filter(|&v| self.accepting[v]));
        let keep: Vec<bool> = (0..n).map(|v| reachable[v] && coreachable[v]).collect();
        if !keep[init] {
            return LabeledMultigraph::new();
        }
        let mut remap = vec![usize::MAX; n];
        let mut out = LabeledMultigraph::new();
        for v in (0..n).filter(|&v| keep[v]) {
            remap[v] = out.add_node(self.names[v].clone(), self.accepting[v]);
        }
        out.set_initial(remap[init]);
        for (a, b, c) in self.edges() {
            if keep[a] && keep[b] {
                out.add_edges(remap[a], remap[b], c);
            }
        }
        out
    }

    /// Number of accepted words of length `n`: paths from the initial node
    /// to an accepting node, counted with multiplicity.
    pub fn word_count(&self, n: usize) -> BigUint {
        let Some(init) = self.initial else {
            return BigUint::zero();
        };
        let mut v = vec![BigUint::zero(); self.node_count()];
        v[init] = BigUint::from(1u8);
        for _ in 0..n {
            let mut next = vec![BigUint::zero(); self.node_count()];
            for (a, b, c) in self.edges() {
                if !v[a].is_zero() {
                    next[b] += &v[a] * c;
                }
            }
            v = next;
        }
        v.iter()
            .enumerate()
            .filter(|(i, _)| self.accepting[*i])
            .fold(BigUint::zero(), |acc, (_, x)| acc + x)
    }

    /// Parses the explicit automaton format:
    ///
    /// ```text
    /// node q0 init accept
    /// node q1 accept
    /// edge q0 q1 : 3
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut g = LabeledMultigraph::new();
        let mut pending = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = content.split_whitespace().collect();
            let err = |column: usize, message: String| Error::Syntax {
                position: Position { line, column },
                message,
            };
            let column_of = |w: &str| content.find(w).map_or(1, |c| c + 1);
            match words.as_slice() {
                [] => {}
                ["node", name, flags @ ..] => {
                    if g.node_id(name).is_some() {
                        return Err(err(column_of(name), format!("duplicate node `{name}`")));
                    }
                    let mut accept = false;
                    let mut init = false;
                    for flag in flags {
                        match *flag {
                            "accept" => accept = true,
                            "init" => init = true,
                            other => return Err(err(column_of(other), format!("unknown node flag `{other}`"))),
                        }
                    }
                    let id = g.add_node(*name, accept);
                    if init {
                        if g.initial.is_some() {
                            return Err(err(column_of("init"), "more than one initial node".into()));
                        }
                        g.set_initial(id);
                    }
                }
                ["edge", from, to, ":", count] => {
                    let c: u64 = count
                        .parse()
                        .map_err(|_| err(column_of(count), format!("`{count}` is not a multiplicity")))?;
                    pending.push((line, from.to_string(), to.to_string(), c));
                }
                [kw, ..] => return Err(err(column_of(kw), format!("cannot parse `{}`", content.trim()))),
            }
        }
        for (line, from, to, c) in pending {
            let find = |name: &str| {
                g.node_id(name).ok_or_else(|| Error::Syntax {
                    position: Position { line, column: 1 },
                    message: format!("unknown node `{name}`"),
                })
            };
            let (a, b) = (find(&from)?, find(&to)?);
            g.add_edges(a, b, c);
        }
        if g.initial.is_none() && g.node_count() > 0 {
            return Err(Error::InvalidModel("automaton has no initial node".into()));
        }
        Ok(g)
    }
}

fn bfs(adjacency: &[Vec<usize>], sources: impl Iterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::new();
    for s in sources {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Behavior restrictions whose product with a model is a multigraph.
#[derive(Debug, Clone, PartialEq)]
pub enum MonitorSpec {
    /// `G P`: only states satisfying the predicate may be visited.
    Invariance(StateFormula),
    /// `G F<w P`: at most `window − 1` consecutive steps may avoid the predicate.
    BoundedRecurrence { window: usize, target: StateFormula },
    ExplicitDfa(LabeledMultigraph),
}

fn predicate<P: Probability>(game: &GameStructure<P>, phi: &StateFormula) -> Result<Vec<bool>> {
    (0..game.state_count()).map(|s| eval_state(game, StateId(s), phi)).collect()
}

/// Multiplicities of the moves `s → t`, over all joint actions.
fn moves<P: Probability>(game: &GameStructure<P>, s: StateId) -> Result<BTreeMap<StateId, u64>> {
    let mut out = BTreeMap::new();
    for j in game.joint_ids() {
        for (t, _) in game.successors(s, j)? {
            *out.entry(*t).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// The product of the model, started at `start`, with a monitor; only the
/// part reachable from the initial node is built.
pub fn build_product<P: Probability>(
    game: &GameStructure<P>,
    start: StateId,
    spec: &MonitorSpec,
) -> Result<LabeledMultigraph> {
    game.check_state(start)?;
    match spec {
        MonitorSpec::ExplicitDfa(g) => Ok(g.clone()),
        MonitorSpec::Invariance(phi) => {
            let holds = predicate(game, phi)?;
            explore(game, (start, 0), holds[start.0], |_, t| holds[t.0].then_some(0))
        }
        MonitorSpec::BoundedRecurrence { window, target } => {
            if *window == 0 {
                return Err(Error::Argument("recurrence window must be at least 1".into()));
            }
            let holds = predicate(game, target)?;
            explore(game, (start, 0), true, |c, t| {
                let next = if holds[t.0] { 0 } else { c + 1 };
                (next < *window).then_some(next)
            })
        }
    }
}

/// Breadth-first construction over nodes `(state, counter)`; `step` maps the
/// current counter and target state to the next counter or drops the edge.
fn explore<P: Probability>(
    game: &GameStructure<P>,
    init: (StateId, usize),
    init_allowed: bool,
    step: impl Fn(usize, StateId) -> Option<usize>,
) -> Result<LabeledMultigraph> {
    let mut g = LabeledMultigraph::new();
    if !init_allowed {
        return Ok(g);
    }
    let mut ids: HashMap<(StateId, usize), usize> = HashMap::new();
    let name = |(s, c): (StateId, usize)| format!("{}#{c}", game.state_name(s));
    let first = g.add_node(name(init), true);
    g.set_initial(first);
    ids.insert(init, first);
    let mut queue = VecDeque::from([init]);
    while let Some(node @ (s, c)) = queue.pop_front() {
        let from = ids[&node];
        for (t, count) in moves(game, s)? {
            let Some(next) = step(c, t) else { continue };
            let key = (t, next);
            let to = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = g.add_node(name(key), true);
                    ids.insert(key, id);
                    queue.push_back(key);
                    id
                }
            };
            g.add_edges(from, to, count);
        }
    }
    Ok(g)
}

/// `ϱ(M(A))` of the trimmed graph.
pub fn graph_spectral_radius(g: &LabeledMultigraph) -> Result<f64> {
    let trimmed = g.trim();
    let m: Vec<Vec<f64>> = trimmed
        .adjacency_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as f64).collect())
        .collect();
    spectral_radius(&m)
}

/// `log₂ ϱ(M(A))` of the trimmed graph; 0 for an empty or finite language.
pub fn asymptotic_entropy(g: &LabeledMultigraph) -> Result<f64> {
    let rho = graph_spectral_radius(g)?;
    Ok(if rho < 1.0 { 0.0 } else { rho.log2().max(0.0) })
}
