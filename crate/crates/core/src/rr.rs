//! Regular realizability: does a regular language meet the filter?
//!
//! Besides the direct product solvers this module holds the counter-based
//! solver for bounded filters and the two reduction constructions: pulling an
//! instance back through a transducer, and the reachability gadget.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::automata::format::{content_lines, parse_alphabet};
use crate::automata::{
    determinize, product_intersect, shortest_word, Alphabet, Dfa, Label, Nfa, Word,
};
use crate::classify::{classify, BoundedExpr, Classification};
use crate::error::{Error, Result};
use crate::transducer::{preimage_automaton, Dfst};

/// A filter paired with an input machine.
#[derive(Debug, Clone)]
pub struct RrInstance {
    pub filter: Nfa,
    pub input: Nfa,
}

impl RrInstance {
    pub fn solve(&self) -> Option<Word> {
        solve_rr_nfa(&self.filter, &self.input)
    }
}

/// Shortest (then shortlex-least) word in both languages. The search runs
/// over the union alphabet with the filter's symbols ordered first.
pub fn solve_rr_nfa(filter: &Nfa, a: &Nfa) -> Option<Word> {
    let union = filter.alphabet().union(a.alphabet());
    let f = filter.widen(&union).expect("union is a superset");
    let a = a.widen(&union).expect("union is a superset");
    shortest_word(&product_intersect(&f, &a).expect("alphabets agree after widening"))
}

pub fn solve_rr(filter: &Dfa, a: &Dfa) -> Option<Word> {
    solve_rr_nfa(&filter.to_nfa(), &a.to_nfa())
}

/// A witness `p x1^i1 y1 … xn^in yn` found by the counter solver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedSolution {
    pub word: Word,
    /// Index of the generating expression.
    pub expr: usize,
    pub exponents: Vec<usize>,
}

/// Tries the expressions in order. Per block, exponents run from 0 until
/// `q · x^i` revisits a state of `a` or becomes undefined; beyond that point
/// nothing new is reachable.
pub fn solve_rr_bounded(exprs: &[BoundedExpr], a: &Dfa) -> Result<Option<BoundedSolution>> {
    for e in exprs {
        e.check_loops()?;
    }
    for (index, e) in exprs.iter().enumerate() {
        let Some(start) = a.run_from(a.initial(), &e.prefix) else {
            continue;
        };
        let mut dead = HashSet::new();
        let mut exponents = Vec::with_capacity(e.blocks.len());
        if search(a, e, 0, start, &mut exponents, &mut dead) {
            let word = e.instantiate(&exponents);
            if !a.run(&word).unwrap_or(false) {
                return Err(Error::Verification(format!(
                    "counter witness {word} rejected by the input machine"
                )));
            }
            return Ok(Some(BoundedSolution {
                word,
                expr: index,
                exponents,
            }));
        }
    }
    Ok(None)
}

fn search(
    a: &Dfa,
    e: &BoundedExpr,
    k: usize,
    q: usize,
    exponents: &mut Vec<usize>,
    dead: &mut HashSet<(usize, usize)>,
) -> bool {
    if k == e.blocks.len() {
        return a.is_accepting(q);
    }
    if dead.contains(&(k, q)) {
        return false;
    }
    let (x, y) = &e.blocks[k];
    let mut seen = HashSet::new();
    let mut cur = Some(q);
    let mut i = 0;
    while let Some(state) = cur {
        if !seen.insert(state) {
            break;
        }
        if let Some(r) = a.run_from(state, y) {
            exponents.push(i);
            if search(a, e, k + 1, r, exponents, dead) {
                return true;
            }
            exponents.pop();
        }
        cur = a.run_from(state, x);
        i += 1;
    }
    dead.insert((k, q));
    false
}

/// Classifies `filter` and runs the counter solver on its decomposition.
pub fn solve_rr_bounded_filter(filter: &Dfa, a: &Dfa) -> Result<Option<BoundedSolution>> {
    match classify(filter)? {
        Classification::Easy { decomposition, .. } => solve_rr_bounded(&decomposition, a),
        Classification::Hard(_) => Err(Error::NotEasy),
    }
}

/// The instance `B` with `L(B) ∩ F2 ≠ ∅` iff `L(a) ∩ t(F2) ≠ ∅`.
pub fn reduce_rr(t: &Dfst, a: &Dfa) -> Result<Dfa> {
    Ok(determinize(&preimage_automaton(t, a)?))
}

/// Directed graph with a designated source and target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    nodes: usize,
    edges: Vec<(usize, usize)>,
    source: usize,
    target: usize,
}

impl Digraph {
    pub fn new(
        nodes: usize,
        edges: Vec<(usize, usize)>,
        source: usize,
        target: usize,
    ) -> Result<Self> {
        let bad = |v: usize| v >= nodes;
        if bad(source) || bad(target) {
            return Err(Error::InvalidGraph(format!(
                "source/target out of range for {nodes} nodes"
            )));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| bad(u) || bad(v)) {
            return Err(Error::InvalidGraph(format!("edge {u} -> {v} out of range")));
        }
        Ok(Digraph {
            nodes,
            edges,
            source,
            target,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn reachable(&self) -> bool {
        let mut seen = vec![false; self.nodes];
        let mut queue = VecDeque::from([self.source]);
        seen[self.source] = true;
        while let Some(u) = queue.pop_front() {
            for &(_, v) in self.edges.iter().filter(|&&(from, _)| from == u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen[self.target]
    }
}

/// A parsed graph file; the `alphabet` line is optional.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Digraph,
    pub alphabet: Option<Alphabet>,
}

/// ```text
/// graph
/// nodes 3
/// source 0
/// target 2
/// edge 0 1
/// edge 1 2
/// ```
pub fn parse_digraph(text: &str) -> Result<GraphFile> {
    let mut lines = content_lines(text);
    let (first_line, first) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    if first.as_slice() != ["graph"] {
        return Err(Error::parse(first_line, "expected `graph`"));
    }
    let number = |line: usize, tok: &str| {
        tok.parse::<usize>()
            .map_err(|_| Error::parse(line, format!("'{tok}' is not a node number")))
    };
    let mut nodes = None;
    let mut source = None;
    let mut target = None;
    let mut alphabet = None;
    let mut edges = Vec::new();
    for (line, tokens) in lines {
        let slot = match (tokens[0], tokens.len()) {
            ("nodes", 2) => &mut nodes,
            ("source", 2) => &mut source,
            ("target", 2) => &mut target,
            ("edge", 3) => {
                let (u, v) = (number(line, tokens[1])?, number(line, tokens[2])?);
                edges.push((line, u, v));
                continue;
            }
            ("alphabet", _) if alphabet.is_none() => {
                alphabet = Some(parse_alphabet(line, &tokens[1..])?);
                continue;
            }
            ("nodes" | "source" | "target" | "edge", _) => {
                return Err(Error::parse(
                    line,
                    format!("malformed `{}` line", tokens[0]),
                ))
            }
            (other, _) => return Err(Error::parse(line, format!("unknown directive '{other}'"))),
        };
        if slot.is_some() {
            return Err(Error::parse(
                line,
                format!("`{}` declared twice", tokens[0]),
            ));
        }
        *slot = Some((line, number(line, tokens[1])?));
    }
    let (_, n) = nodes.ok_or_else(|| Error::parse(first_line, "missing `nodes` line"))?;
    let endpoint = |slot: Option<(usize, usize)>, name: &str| match slot {
        None => Err(Error::parse(first_line, format!("missing `{name}` line"))),
        Some((line, v)) if v >= n => Err(Error::parse(line, format!("node {v} out of range"))),
        Some((_, v)) => Ok(v),
    };
    let s = endpoint(source, "source")?;
    let t = endpoint(target, "target")?;
    if let Some(&(line, u, v)) = edges.iter().find(|&&(_, u, v)| u >= n || v >= n) {
        return Err(Error::parse(line, format!("edge {u} {v} out of range")));
    }
    let graph = Digraph::new(n, edges.into_iter().map(|(_, u, v)| (u, v)).collect(), s, t)?;
    Ok(GraphFile { graph, alphabet })
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "graph")?;
        writeln!(f, "nodes {}", self.nodes)?;
        writeln!(f, "source {}", self.source)?;
        writeln!(f, "target {}", self.target)?;
        for (u, v) in &self.edges {
            writeln!(f, "edge {u} {v}")?;
        }
        Ok(())
    }
}

/// Node `i` of `g` is state `i`; edges become ε-moves, and a `w`-labelled
/// chain leads from the target to the only accepting state.
pub fn reachability_gadget(g: &Digraph, w: &Word, alphabet: &Alphabet) -> Result<Nfa> {
    let chain = alphabet.encode(w)?;
    let mut n = Nfa::with_states(alphabet.clone(), g.nodes());
    n.add_initial(g.source());
    for &(u, v) in g.edges() {
        n.add_edge(u, Label::Eps, v);
    }
    let end = n.add_path(g.target(), &chain);
    n.set_accepting(end, true);
    Ok(n)
}
